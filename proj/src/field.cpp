#include "hllg/field.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "hllg/rng.hpp"

namespace hllg {

double unit_drift(const NodalField& u) {
    const std::size_t total = u.grid.size();
    double drift = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        double s = 0.0;
        for (int c = 0; c < u.ncomp(); ++c) s += u.comps[c][i] * u.comps[c][i];
        drift = std::max(drift, std::abs(std::sqrt(s) - 1.0));
    }
    return drift;
}

NodalField cross(const NodalField& a, const NodalField& b) {
    if (!(a.grid == b.grid)) throw StructuralError("cross: fields live on different grids");
    if (a.ncomp() != 3 || b.ncomp() != 3)
        throw UnsupportedTargetError("cross: requires 3-component fields (target S^2)");
    NodalField out(a.grid, 3);
    const std::size_t total = a.grid.size();
    for (std::size_t i = 0; i < total; ++i) {
        const double a0 = a.comps[0][i], a1 = a.comps[1][i], a2 = a.comps[2][i];
        const double b0 = b.comps[0][i], b1 = b.comps[1][i], b2 = b.comps[2][i];
        out.comps[0][i] = a1 * b2 - a2 * b1;
        out.comps[1][i] = a2 * b0 - a0 * b2;
        out.comps[2][i] = a0 * b1 - a1 * b0;
    }
    return out;
}

NodalField dot(const NodalField& a, const NodalField& b) {
    if (!(a.grid == b.grid) || a.ncomp() != b.ncomp())
        throw StructuralError("dot: mismatched fields");
    NodalField out(a.grid, 1);
    const std::size_t total = a.grid.size();
    for (std::size_t i = 0; i < total; ++i) {
        double s = 0.0;
        for (int c = 0; c < a.ncomp(); ++c) s += a.comps[c][i] * b.comps[c][i];
        out.comps[0][i] = s;
    }
    return out;
}

NodalField project_normal(const SphereField& u, const NodalField& xi) {
    if (!(u.grid == xi.grid) || u.ncomp() != xi.ncomp())
        throw StructuralError("project_normal: mismatched fields");
    NodalField out(u.grid, u.ncomp());
    const std::size_t total = u.grid.size();
    for (std::size_t i = 0; i < total; ++i) {
        double s = 0.0;
        for (int c = 0; c < u.ncomp(); ++c) s += u.values.comps[c][i] * xi.comps[c][i];
        for (int c = 0; c < u.ncomp(); ++c) out.comps[c][i] = s * u.values.comps[c][i];
    }
    return out;
}

NodalField project_tangent(const SphereField& u, const NodalField& xi) {
    NodalField out = project_normal(u, xi);
    const std::size_t total = u.grid.size();
    for (int c = 0; c < u.ncomp(); ++c)
        for (std::size_t i = 0; i < total; ++i) out.comps[c][i] = xi.comps[c][i] - out.comps[c][i];
    return out;
}

RenormalizeReport renormalize(NodalField& u, double time) {
    const std::size_t total = u.grid.size();
    RenormalizeReport rep;
    for (std::size_t i = 0; i < total; ++i) {
        double s = 0.0;
        for (int c = 0; c < u.ncomp(); ++c) s += u.comps[c][i] * u.comps[c][i];
        const double norm = std::sqrt(s);
        if (norm < 0.5) {
            std::ostringstream os;
            os << "constraint collapse: |u| = " << norm << " at node " << i << ", t = " << time;
            throw ConstraintCollapseError(os.str(), time, i);
        }
        rep.drift = std::max(rep.drift, std::abs(norm - 1.0));
        const double inv = 1.0 / norm;
        for (int c = 0; c < u.ncomp(); ++c) u.comps[c][i] *= inv;
    }
    return rep;
}

SphereField make_sphere_field(const SpectralGrid& grid, int m, std::vector<double> Q,
                              NodalField values, double time) {
    if (m < 1) throw ParameterError("target dimension m must be >= 1");
    if (static_cast<int>(Q.size()) != m + 1)
        throw StructuralError("base point Q has wrong dimension");
    double qn = 0.0;
    for (double q : Q) qn += q * q;
    qn = std::sqrt(qn);
    if (!(qn > 0.0)) throw ParameterError("base point Q must be nonzero");
    for (double& q : Q) q /= qn;
    if (values.ncomp() != m + 1 || !(values.grid == grid))
        throw StructuralError("sphere field values do not match grid/target");
    renormalize(values, time);
    SphereField out;
    out.grid = grid;
    out.m = m;
    out.Q = std::move(Q);
    out.values = std::move(values);
    return out;
}

SphereField make_great_circle(const SpectralGrid& grid, const std::vector<double>& theta) {
    if (theta.size() != grid.size())
        throw StructuralError("make_great_circle: profile size does not match grid");
    NodalField v(grid, 3);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        v.comps[0][i] = std::cos(theta[i]);
        v.comps[1][i] = std::sin(theta[i]);
        v.comps[2][i] = 0.0;
    }
    return make_sphere_field(grid, 2, {1.0, 0.0, 0.0}, std::move(v));
}

int winding_number(const SphereField& u) {
    if (u.grid.n != 1) throw ParameterError("winding_number: defined for n = 1");
    const std::size_t total = u.grid.size();
    const double pi = 3.14159265358979323846;
    double acc = 0.0;
    double prev = std::atan2(u.values.comps[1][0], u.values.comps[0][0]);
    for (std::size_t i = 1; i <= total; ++i) {
        const std::size_t j = i % total;
        const double cur = std::atan2(u.values.comps[1][j], u.values.comps[0][j]);
        double d = cur - prev;
        while (d > pi) d -= 2.0 * pi;
        while (d < -pi) d += 2.0 * pi;
        acc += d;
        prev = cur;
    }
    return static_cast<int>(std::lround(acc / (2.0 * pi)));
}

PerturbationResult make_perturbation(const SpectralGrid& grid, const std::vector<double>& Q,
                                     double amplitude, int kmax, std::uint64_t seed) {
    if (amplitude < 0.0) throw ParameterError("make_perturbation: amplitude must be >= 0");
    const int m = static_cast<int>(Q.size()) - 1;
    if (m < 1) throw ParameterError("make_perturbation: Q must have at least 2 components");
    for (int j = 0; j < grid.n; ++j)
        if (2 * kmax >= grid.dims[j])
            throw ParameterError("make_perturbation: kmax must stay below the Nyquist mode");

    // Band-limited Gaussian noise per component: one complex draw per
    // canonical mode (first nonzero k positive), mirrored Hermitian.
    Rng rng(seed);
    FourierField noise(grid, m + 1);
    for (int c = 0; c <= m; ++c) {
        for_each_index(grid, [&](std::size_t idx, int i0, int i1, int i2) {
            const int k0 = grid.mode(0, i0), k1 = grid.mode(1, i1), k2 = grid.mode(2, i2);
            if (std::abs(k0) > kmax || std::abs(k1) > kmax || std::abs(k2) > kmax) return;
            if (k0 == 0 && k1 == 0 && k2 == 0) return;  // mean zero
            const bool canonical = (k0 > 0) || (k0 == 0 && k1 > 0) || (k0 == 0 && k1 == 0 && k2 > 0);
            if (!canonical) return;
            const std::complex<double> z(rng.next_gaussian(), rng.next_gaussian());
            noise.comps[c][idx] = z;
            const std::size_t mirror =
                (static_cast<std::size_t>((grid.dims[0] - i0) % grid.dims[0]) * grid.dims[1] +
                 (grid.dims[1] - i1) % grid.dims[1]) *
                    grid.dims[2] +
                (grid.dims[2] - i2) % grid.dims[2];
            noise.comps[c][mirror] = std::conj(z);
        });
    }
    NodalField g = inverse_transform(noise);

    // Tangent projection at Q and unit-RMS normalization.
    std::vector<double> Qn = Q;
    double qn = 0.0;
    for (double q : Qn) qn += q * q;
    qn = std::sqrt(qn);
    for (double& q : Qn) q /= qn;

    const std::size_t total = grid.size();
    double rms = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        double s = 0.0;
        for (int c = 0; c <= m; ++c) s += Qn[c] * g.comps[c][i];
        double mag = 0.0;
        for (int c = 0; c <= m; ++c) {
            g.comps[c][i] -= s * Qn[c];
            mag += g.comps[c][i] * g.comps[c][i];
        }
        rms += mag;
    }
    rms = std::sqrt(rms / static_cast<double>(total));

    NodalField v(grid, m + 1);
    const double scale = (rms > 0.0) ? amplitude / rms : 0.0;
    for (std::size_t i = 0; i < total; ++i)
        for (int c = 0; c <= m; ++c) v.comps[c][i] = Qn[c] + scale * g.comps[c][i];

    PerturbationResult res;
    res.drift = unit_drift(v);
    res.u = make_sphere_field(grid, m, Qn, std::move(v));

    // Measured H^(n/2) seminorm of the generated data.
    FourierField uf = forward_transform(res.u.values);
    ModeTable mt(grid);
    const double s_exp = grid.n / 2.0;
    double acc = 0.0;
    for (int c = 0; c <= m; ++c) {
        for_each_index(grid, [&](std::size_t idx, int i0, int i1, int i2) {
            const double f0 = mt.freq[0][i0], f1 = mt.freq[1][i1], f2 = mt.freq[2][i2];
            const double xi2 = f0 * f0 + f1 * f1 + f2 * f2;
            if (xi2 > 0.0) acc += std::pow(xi2, s_exp) * std::norm(uf.comps[c][idx]);
        });
    }
    res.sobolev_n_half = std::sqrt(acc * grid.volume());
    return res;
}

SphereField rotate(const SphereField& u, const std::vector<double>& R) {
    const int c = u.ncomp();
    if (static_cast<int>(R.size()) != c * c) throw StructuralError("rotate: matrix size mismatch");
    SphereField out = u;
    for (int a = 0; a < c; ++a) {
        out.Q[a] = 0.0;
        for (int b = 0; b < c; ++b) out.Q[a] += R[a * c + b] * u.Q[b];
    }
    const std::size_t total = u.grid.size();
    for (std::size_t i = 0; i < total; ++i) {
        for (int a = 0; a < c; ++a) {
            double s = 0.0;
            for (int b = 0; b < c; ++b) s += R[a * c + b] * u.values.comps[b][i];
            out.values.comps[a][i] = s;
        }
    }
    return out;
}

}  // namespace hllg
