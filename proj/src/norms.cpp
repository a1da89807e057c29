#include "hllg/norms.hpp"

#include <algorithm>
#include <cmath>

namespace hllg {

double sobolev_seminorm(const FourierField& F, double s) {
    if (s < 0.0) throw ParameterError("sobolev_seminorm: s must be >= 0");
    const auto& g = F.grid;
    ModeTable mt(g);
    double acc = 0.0;
    for (int c = 0; c < F.ncomp(); ++c) {
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const double f0 = mt.freq[0][i0], f1 = mt.freq[1][i1], f2 = mt.freq[2][i2];
            const double xi2 = f0 * f0 + f1 * f1 + f2 * f2;
            if (xi2 > 0.0) acc += std::pow(xi2, s) * std::norm(F.comps[c][idx]);
        });
    }
    return std::sqrt(acc * g.volume());
}

double sobolev_seminorm(const NodalField& f, double s) {
    return sobolev_seminorm(forward_transform(f), s);
}

double lp_norm(const NodalField& f, double p) {
    const std::size_t total = f.grid.size();
    const bool inf = (p == kLpInfinity) || std::isinf(p);
    if (!inf && p < 1.0) throw ParameterError("lp_norm: p must be >= 1 (or infinity)");
    double acc = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        double mag2 = 0.0;
        for (int c = 0; c < f.ncomp(); ++c) mag2 += f.comps[c][i] * f.comps[c][i];
        const double mag = std::sqrt(mag2);
        if (inf)
            acc = std::max(acc, mag);
        else
            acc += std::pow(mag, p);
    }
    if (inf) return acc;
    return std::pow(acc * f.grid.cell_volume(), 1.0 / p);
}

namespace {

// Mean oscillation of f over the periodic cube with side w (nodes) anchored at
// `base` (per-axis node offsets).
double cube_oscillation(const NodalField& f, const std::array<int, 3>& base,
                        const std::array<int, 3>& w) {
    const auto& g = f.grid;
    const auto& v = f.comps[0];
    const long cnt = static_cast<long>(w[0]) * w[1] * w[2];
    double mean = 0.0;
    for (int a = 0; a < w[0]; ++a) {
        const int i0 = (base[0] + a) % g.dims[0];
        for (int b = 0; b < w[1]; ++b) {
            const int i1 = (base[1] + b) % g.dims[1];
            const std::size_t row = (static_cast<std::size_t>(i0) * g.dims[1] + i1) * g.dims[2];
            for (int c = 0; c < w[2]; ++c) mean += v[row + (base[2] + c) % g.dims[2]];
        }
    }
    mean /= static_cast<double>(cnt);
    double osc = 0.0;
    for (int a = 0; a < w[0]; ++a) {
        const int i0 = (base[0] + a) % g.dims[0];
        for (int b = 0; b < w[1]; ++b) {
            const int i1 = (base[1] + b) % g.dims[1];
            const std::size_t row = (static_cast<std::size_t>(i0) * g.dims[1] + i1) * g.dims[2];
            for (int c = 0; c < w[2]; ++c)
                osc += std::abs(v[row + (base[2] + c) % g.dims[2]] - mean);
        }
    }
    return osc / static_cast<double>(cnt);
}

}  // namespace

double bmo_norm(const NodalField& scalar) {
    if (scalar.ncomp() != 1) throw StructuralError("bmo_norm: expects a scalar field");
    const auto& g = scalar.grid;
    double best = 0.0;
    for (int level = 1;; ++level) {
        std::array<int, 3> w{1, 1, 1}, step{1, 1, 1};
        bool ok = true;
        for (int j = 0; j < g.n; ++j) {
            w[j] = g.dims[j] >> level;
            if (w[j] < 4) ok = false;
            step[j] = w[j] / 2;
        }
        if (!ok) break;
        std::array<int, 3> nsteps{1, 1, 1};
        for (int j = 0; j < g.n; ++j) nsteps[j] = g.dims[j] / step[j];
        for (int a = 0; a < nsteps[0]; ++a)
            for (int b = 0; b < nsteps[1]; ++b)
                for (int c = 0; c < nsteps[2]; ++c) {
                    const std::array<int, 3> base{a * step[0], b * step[1], c * step[2]};
                    best = std::max(best, cube_oscillation(scalar, base, w));
                }
    }
    return best;
}

double energy(const SphereField& u) {
    const double s = sobolev_seminorm(u.values, 0.5);
    return 0.5 * s * s;
}

double energy_eps(const SphereField& u, double eps, int nu) {
    if (nu != 1 && nu != 2) throw ParameterError("energy_eps: nu must be 1 or 2");
    if (eps < 0.0) throw ParameterError("energy_eps: eps must be >= 0");
    FourierField F = forward_transform(u.values);
    const double half = sobolev_seminorm(F, 0.5);
    double out = 0.5 * half * half;
    if (eps > 0.0) {
        // ||grad^nu u||_{L2} equals the H^nu seminorm spectrally.
        const double hi = sobolev_seminorm(F, static_cast<double>(nu));
        out += 0.5 * eps * hi * hi;
    }
    return out;
}

namespace {

NodalField truncated(const NodalField& f, DealiasPolicy policy) {
    if (policy == DealiasPolicy::none) return f;
    return inverse_transform(dealias(forward_transform(f), policy));
}

NodalField pointwise_product(const NodalField& a, const NodalField& b) {
    NodalField out(a.grid, 1);
    for (std::size_t i = 0; i < a.grid.size(); ++i)
        out.comps[0][i] = a.comps[0][i] * b.comps[0][i];
    return out;
}

}  // namespace

NodalField riesz_commutator(int axis, const NodalField& b, const NodalField& g,
                            DealiasPolicy policy) {
    if (b.ncomp() != 1 || g.ncomp() != 1)
        throw StructuralError("riesz_commutator: expects scalar fields");
    if (!(b.grid == g.grid)) throw StructuralError("riesz_commutator: grid mismatch");
    const NodalField bt = truncated(b, policy);
    const NodalField gt = truncated(g, policy);
    // R_j(b g)
    FourierField prod_hat = forward_transform(pointwise_product(bt, gt));
    NodalField term1 = inverse_transform(dealias(riesz_transform(prod_hat, axis), policy));
    // b R_j g
    NodalField rg = inverse_transform(riesz_transform(forward_transform(gt), axis));
    NodalField out(b.grid, 1);
    for (std::size_t i = 0; i < b.grid.size(); ++i)
        out.comps[0][i] = term1.comps[0][i] - bt.comps[0][i] * rg.comps[0][i];
    return out;
}

NodalField commutator_riesz(const NodalField& b, const NodalField& f, DealiasPolicy policy) {
    if (!(b.grid == f.grid)) throw StructuralError("commutator_riesz: grid mismatch");
    if (b.ncomp() != 1 && b.ncomp() != f.ncomp())
        throw StructuralError("commutator_riesz: b must be scalar or match f");
    const auto& g = b.grid;
    FourierField fhat = forward_transform(f);
    NodalField acc(g, 1);
    for (int k = 0; k < f.ncomp(); ++k) {
        NodalField bk(g, 1);
        bk.comps[0] = b.comps[b.ncomp() == 1 ? 0 : k];
        FourierField fk(g, 1);
        fk.comps[0] = fhat.comps[k];
        for (int j = 0; j < g.n; ++j) {
            NodalField djfk = inverse_transform(derivative(fk, j));
            NodalField term = riesz_commutator(j, bk, djfk, policy);
            for (std::size_t i = 0; i < g.size(); ++i) acc.comps[0][i] += term.comps[0][i];
        }
    }
    return acc;
}

NodalField commutator_quarter(const NodalField& a, const NodalField& f, DealiasPolicy policy) {
    if (a.ncomp() != 3 || f.ncomp() != 3)
        throw UnsupportedTargetError("commutator_quarter: requires 3-component fields (m = 2)");
    if (!(a.grid == f.grid)) throw StructuralError("commutator_quarter: grid mismatch");
    const NodalField at = truncated(a, policy);
    const NodalField ft = truncated(f, policy);
    NodalField term1 = inverse_transform(
        dealias(fractional_laplacian(forward_transform(cross(at, ft)), 0.25), policy));
    NodalField qf = inverse_transform(fractional_laplacian(forward_transform(ft), 0.25));
    NodalField term2 = cross(at, qf);
    NodalField out(a.grid, 3);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a.grid.size(); ++i)
            out.comps[c][i] = term1.comps[c][i] - term2.comps[c][i];
    return out;
}

}  // namespace hllg
