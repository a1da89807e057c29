#pragma once

#include <complex>
#include <vector>

#include "hllg/grid.hpp"

namespace hllg {

// Real nodal values, one contiguous array per component, row major over nodes.
struct NodalField {
    SpectralGrid grid;
    std::vector<std::vector<double>> comps;

    NodalField() = default;
    NodalField(const SpectralGrid& g, int ncomp)
        : grid(g), comps(ncomp, std::vector<double>(g.size(), 0.0)) {}
    int ncomp() const { return static_cast<int>(comps.size()); }
};

// Complex mode amplitudes in the convention "forward transform divides by the
// node count": a field cos(2*pi*x/L) has coefficients 1/2 at k = +-1.
struct FourierField {
    SpectralGrid grid;
    std::vector<std::vector<std::complex<double>>> comps;

    FourierField() = default;
    FourierField(const SpectralGrid& g, int ncomp)
        : grid(g), comps(ncomp, std::vector<std::complex<double>>(g.size(), 0.0)) {}
    int ncomp() const { return static_cast<int>(comps.size()); }
};

enum class DealiasPolicy { none, quadratic, cubic };

FourierField forward_transform(const NodalField& f);
// Throws StructuralError when the imaginary residue betrays a non-Hermitian
// input; the message carries the violation magnitude.
NodalField inverse_transform(const FourierField& F);

// Max |F(k) - conj(F(-k))| over paired modes (diagnostic; real fields give ~0).
double hermitian_defect(const FourierField& F);

// Multiplier |xi|^(2s); zero mode -> 0. Requires s > 0.
FourierField fractional_laplacian(const FourierField& F, double s);
// Multiplier -i xi_j/|xi|; zero mode and the axis-j Nyquist plane -> 0.
FourierField riesz_transform(const FourierField& F, int axis);
// Axis-j multiplier i xi_j with the axis-j Nyquist plane zeroed.
FourierField derivative(const FourierField& F, int axis);
std::vector<FourierField> gradient(const FourierField& F);

// Zeroes modes with p*|k_j| >= N_j on any axis (p = 3 quadratic, 4 cubic).
FourierField dealias(const FourierField& F, DealiasPolicy policy);
bool mode_within_band(const SpectralGrid& g, int i0, int i1, int i2, DealiasPolicy policy);

// Same trigonometric polynomial sampled on a grid refined by `factor` per
// axis (Fourier interpolation; exact for band-limited fields).
NodalField refine(const NodalField& f, int factor);

// Discrete L2 inner product Sum_x a.b * cell_volume (fixed summation order).
double inner_product(const NodalField& a, const NodalField& b);

}  // namespace hllg
