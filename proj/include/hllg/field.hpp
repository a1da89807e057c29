#pragma once

#include <cstdint>
#include <vector>

#include "hllg/spectral.hpp"

namespace hllg {

// Nodal map u: grid -> S^m in R^(m+1), kept unit-valued to ~1e-10, together
// with the base point Q it approaches away from the perturbation.
struct SphereField {
    SpectralGrid grid;
    int m = 2;
    std::vector<double> Q;  // size m+1, |Q| = 1
    NodalField values;      // m+1 components

    int ncomp() const { return m + 1; }
};

// Largest pointwise deviation max_x | |u(x)| - 1 |.
double unit_drift(const NodalField& u);

// Pointwise vector product a x b; both fields must be 3-component.
NodalField cross(const NodalField& a, const NodalField& b);
// Pointwise scalar product (1-component output).
NodalField dot(const NodalField& a, const NodalField& b);
// Pi_u xi = (u . xi) u, the projection onto the normal line along u.
NodalField project_normal(const SphereField& u, const NodalField& xi);
// (1 - Pi_u) xi, the tangent-plane part.
NodalField project_tangent(const SphereField& u, const NodalField& xi);

struct RenormalizeReport {
    double drift = 0.0;  // max | |u|-1 | before renormalization
};

// Pointwise u/|u|. Nodes with |u| < 0.5 abort with ConstraintCollapseError
// (carrying `time` for the report); that magnitude of drift means the
// integrator has failed, not that the state needs repair.
RenormalizeReport renormalize(NodalField& u, double time = 0.0);
SphereField make_sphere_field(const SpectralGrid& grid, int m, std::vector<double> Q,
                              NodalField values, double time = 0.0);

// Equator map u = (cos theta, sin theta, 0) from a nodal angle profile.
SphereField make_great_circle(const SpectralGrid& grid, const std::vector<double>& theta);

// Winding number of a 1d great-circle field around the equator.
int winding_number(const SphereField& u);

struct PerturbationResult {
    SphereField u;
    double sobolev_n_half = 0.0;  // measured ||u||_{H^{n/2}} seminorm
    double drift = 0.0;           // pre-renormalization drift of Q + a*v
};

// Q plus band-limited tangent Gaussian noise (|k_j| <= kmax, unit spatial RMS
// before scaling by `amplitude`), renormalized. Mode coefficients are drawn in
// a fixed lexicographic order, so the result is a pure function of the seed.
PerturbationResult make_perturbation(const SpectralGrid& grid, const std::vector<double>& Q,
                                     double amplitude, int kmax, std::uint64_t seed);

// Fixed rotation applied to every nodal value (and Q); R is (m+1)x(m+1),
// row major.
SphereField rotate(const SphereField& u, const std::vector<double>& R);

}  // namespace hllg
