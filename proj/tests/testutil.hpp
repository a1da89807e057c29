#pragma once

#include <cmath>
#include <vector>

#include "hllg/field.hpp"
#include "hllg/norms.hpp"
#include "hllg/rng.hpp"
#include "hllg/spectral.hpp"

namespace testutil {

inline constexpr double kPi = 3.14159265358979323846;

inline hllg::SpectralGrid grid1(int N = 64, double L = 2.0 * kPi) {
    return hllg::SpectralGrid::make(1, {N, 1, 1}, {L, 1.0, 1.0});
}
inline hllg::SpectralGrid grid2(int N = 32, double L = 2.0 * kPi) {
    return hllg::SpectralGrid::make(2, {N, N, 1}, {L, L, 1.0});
}
inline hllg::SpectralGrid grid3(int N = 16, double L = 2.0 * kPi) {
    return hllg::SpectralGrid::make(3, {N, N, N}, {L, L, L});
}
inline hllg::SpectralGrid grid_n(int n, int N, double L = 2.0 * kPi) {
    return n == 1 ? grid1(N, L) : n == 2 ? grid2(N, L) : grid3(N, L);
}

// Mean-zero band-limited random scalar/vector field (Hermitian by mirrored
// draws), |k_j| <= kmax per axis, roughly unit amplitude.
inline hllg::NodalField random_band_limited(const hllg::SpectralGrid& g, int ncomp, int kmax,
                                            std::uint64_t seed) {
    hllg::Rng rng(seed);
    hllg::FourierField F(g, ncomp);
    for (int c = 0; c < ncomp; ++c) {
        hllg::for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const int k0 = g.mode(0, i0), k1 = g.mode(1, i1), k2 = g.mode(2, i2);
            if (std::abs(k0) > kmax || std::abs(k1) > kmax || std::abs(k2) > kmax) return;
            if (k0 == 0 && k1 == 0 && k2 == 0) return;
            const bool canonical =
                (k0 > 0) || (k0 == 0 && k1 > 0) || (k0 == 0 && k1 == 0 && k2 > 0);
            if (!canonical) return;
            const std::complex<double> z(rng.next_gaussian(), rng.next_gaussian());
            F.comps[c][idx] = 0.25 * z;
            const std::size_t mirror =
                (static_cast<std::size_t>((g.dims[0] - i0) % g.dims[0]) * g.dims[1] +
                 (g.dims[1] - i1) % g.dims[1]) *
                    g.dims[2] +
                (g.dims[2] - i2) % g.dims[2];
            F.comps[c][mirror] = std::conj(0.25 * z);
        });
    }
    return hllg::inverse_transform(F);
}

inline double max_abs_diff(const hllg::NodalField& a, const hllg::NodalField& b) {
    double m = 0.0;
    for (int c = 0; c < a.ncomp(); ++c)
        for (std::size_t i = 0; i < a.comps[c].size(); ++i)
            m = std::max(m, std::abs(a.comps[c][i] - b.comps[c][i]));
    return m;
}

inline double max_abs(const hllg::NodalField& a) {
    double m = 0.0;
    for (int c = 0; c < a.ncomp(); ++c)
        for (std::size_t i = 0; i < a.comps[c].size(); ++i)
            m = std::max(m, std::abs(a.comps[c][i]));
    return m;
}

// Smooth random sphere field: base point Q = e3 plus band-limited tangent
// noise of the given amplitude.
inline hllg::SphereField random_sphere_field(const hllg::SpectralGrid& g, double amplitude,
                                             int kmax, std::uint64_t seed) {
    return hllg::make_perturbation(g, {0.0, 0.0, 1.0}, amplitude, kmax, seed).u;
}

}  // namespace testutil
