#pragma once

#include "hllg/field.hpp"
#include "hllg/spectral.hpp"

namespace hllg {

// ||f||_{H^s} seminorm = (Sum_{xi != 0} |xi|^(2s) |f^(xi)|^2 * volume)^(1/2),
// summed over components; the zero mode is excluded (homogeneous seminorm).
double sobolev_seminorm(const FourierField& F, double s);
double sobolev_seminorm(const NodalField& f, double s);

// Nodal quadrature (Sum |f(x)|^p * cell_volume)^(1/p); |f(x)| is the Euclidean
// magnitude over components. p = infinity gives the max over nodes.
double lp_norm(const NodalField& f, double p);
constexpr double kLpInfinity = -1.0;  // sentinel accepted by lp_norm

// Mean oscillation maximized over the dyadic cube family: the box subdivided
// by 2, 4, ... down to >= 4 nodes per side, each scale at all half-cube
// translates (periodic).
double bmo_norm(const NodalField& scalar);

// E(u) = 1/2 ||u||^2_{H^(1/2)}.
double energy(const SphereField& u);
// E_eps(u) = 1/2 (eps ||grad^nu u||^2_{L2} + ||u||^2_{H^(1/2)}), nu in {1,2}.
double energy_eps(const SphereField& u, double eps, int nu);

// Scalar commutator [R_j, b] g = R_j(b g) - b R_j g for scalar fields b, g;
// products are dealiased per `policy` (inputs and output).
NodalField riesz_commutator(int axis, const NodalField& b, const NodalField& g,
                            DealiasPolicy policy = DealiasPolicy::quadratic);

// Tensorial contraction [R, b] grad f = Sum_{j,k} [R_j, b_k] d_j f_k (scalar
// output). A 1-component b is broadcast over the components of f.
NodalField commutator_riesz(const NodalField& b, const NodalField& f,
                            DealiasPolicy policy = DealiasPolicy::quadratic);

// [(-Laplacian)^(1/4), Omega_a] f = (-L)^(1/4)(a x f) - a x (-L)^(1/4) f for
// 3-component fields (target S^2 only).
NodalField commutator_quarter(const NodalField& a, const NodalField& f,
                              DealiasPolicy policy = DealiasPolicy::quadratic);

}  // namespace hllg
