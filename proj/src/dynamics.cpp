#include "hllg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace hllg {

std::string to_string(Equation eq) {
    switch (eq) {
        case Equation::HLLG: return "hllg";
        case Equation::HHHF: return "hhhf";
        case Equation::HWM: return "hwm";
        case Equation::LLGR: return "llgr";
    }
    return "?";
}

std::string to_string(Scheme s) { return s == Scheme::ETDRK2 ? "etdrk2" : "rk4"; }

double SimParams::alpha() const {
    switch (equation) {
        case Equation::HWM: return 0.0;
        case Equation::HHHF: return 1.0;
        default: return lambda / (1.0 + lambda * lambda);
    }
}

std::optional<double> SimParams::beta() const {
    if (lambda == 0.0) return std::nullopt;
    return alpha() / lambda;
}

double SimParams::damping() const {
    switch (equation) {
        case Equation::HWM: return 0.0;
        case Equation::HHHF: return 1.0;
        default: return lambda;
    }
}

void SimParams::validate(int n) const {
    if (nu != 1 && nu != 2) throw ParameterError("nu must be 1 or 2");
    if (lambda < 0.0) throw ParameterError("damping must be >= 0");
    if (epsilon < 0.0) throw ParameterError("epsilon must be >= 0");
    if (!(dt > 0.0)) throw ParameterError("dt must be > 0");
    if (!(T > 0.0)) throw ParameterError("T must be > 0");
    if (sample_every < 1) throw ParameterError("sample_every must be >= 1");
    switch (equation) {
        case Equation::HLLG:
            if (!(lambda > 0.0)) throw ParameterError("hllg requires lambda > 0 (lambda = 0 is the hwm selector)");
            if (epsilon != 0.0) throw ParameterError("hllg requires epsilon = 0 (use llgr for epsilon > 0)");
            break;
        case Equation::HWM:
            if (lambda != 0.0) throw ParameterError("hwm requires lambda = 0");
            if (epsilon != 0.0) throw ParameterError("hwm requires epsilon = 0");
            break;
        case Equation::HHHF:
            if (epsilon != 0.0) throw ParameterError("hhhf requires epsilon = 0");
            break;
        case Equation::LLGR:
            if (!(lambda > 0.0)) throw ParameterError("llgr requires lambda > 0");
            if (!(epsilon > 0.0)) throw ParameterError("llgr requires epsilon > 0");
            if (!allow_nu_override) {
                const int want = (n == 1) ? 1 : 2;
                if (nu != want)
                    throw ParameterError("llgr requires nu = " + std::to_string(want) + " for n = " +
                                         std::to_string(n) + " (set allow_nu_override to lift)");
            }
            break;
    }
    for (double s : row_seminorms)
        if (s < 0.0) throw ParameterError("row seminorm orders must be >= 0");
    for (double s : integral_seminorms)
        if (s < 0.0) throw ParameterError("integral seminorm orders must be >= 0");
}

namespace {

double phi1(double z) {
    if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-3) return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
    return (std::expm1(z) - z) / (z * z);
}

void require_target(const SphereField& u, Equation eq) {
    if (eq != Equation::HHHF && u.m != 2)
        throw UnsupportedTargetError(to_string(eq) + " requires the target S^2 (m = 2), got m = " +
                                     std::to_string(u.m));
}

}  // namespace

struct Integrator::Impl {
    SphereField u;
    SimParams p;
    double t = 0.0;
    int ncomp = 0;
    std::size_t total = 0;

    std::vector<double> xi2;                     // |xi|^2 per mode
    std::vector<double> lsym;                    // eps|xi|^(2 nu) + |xi|
    std::vector<double> csym;                    // -damping * lsym
    std::vector<unsigned char> band;             // dealias mask
    std::vector<double> exp_c, dtphi1, dtphi2;   // ETDRK2 factors
    std::vector<double> semi_s;                  // seminorm orders with weight tables
    std::vector<std::vector<double>> semi_w;     // |xi|^(2s) per mode
    std::optional<FourierField> uhat;            // cached spectrum of `u`

    Impl(SphereField u0, const SimParams& params) : u(std::move(u0)), p(params) {
        p.validate(u.grid.n);
        require_target(u, p.equation);
        ncomp = u.ncomp();
        total = u.grid.size();
        const auto& g = u.grid;
        ModeTable mt(g);
        xi2.resize(total);
        lsym.resize(total);
        csym.resize(total);
        band.resize(total);
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const double f0 = mt.freq[0][i0], f1 = mt.freq[1][i1], f2 = mt.freq[2][i2];
            const double x2 = f0 * f0 + f1 * f1 + f2 * f2;
            xi2[idx] = x2;
            const double mag = std::sqrt(x2);
            double l = mag;
            if (p.epsilon > 0.0) l += p.epsilon * ((p.nu == 1) ? x2 : x2 * x2);
            lsym[idx] = l;
            csym[idx] = -p.damping() * l;
            band[idx] = mode_within_band(g, i0, i1, i2, p.dealias_policy) ? 1 : 0;
        });
        if (p.scheme == Scheme::ETDRK2) {
            exp_c.resize(total);
            dtphi1.resize(total);
            dtphi2.resize(total);
            for (std::size_t i = 0; i < total; ++i) {
                const double z = csym[i] * p.dt;
                exp_c[i] = std::exp(z);
                dtphi1[i] = p.dt * phi1(z);
                dtphi2[i] = p.dt * phi2(z);
            }
        }
        // Weight tables for every seminorm order the run needs.
        auto add_s = [&](double s) {
            for (double q : semi_s)
                if (q == s) return;
            semi_s.push_back(s);
            std::vector<double> w(total);
            for (std::size_t i = 0; i < total; ++i) w[i] = (xi2[i] > 0.0) ? std::pow(xi2[i], s) : 0.0;
            semi_w.push_back(std::move(w));
        };
        add_s(0.5);
        add_s(static_cast<double>(p.nu));
        add_s((g.n + 1) / 2.0);
        for (double s : p.row_seminorms) add_s(s);
        for (double s : p.integral_seminorms) add_s(s);
    }

    const FourierField& spectrum() {
        if (!uhat) uhat = forward_transform(u.values);
        return *uhat;
    }

    double seminorm_sq(const FourierField& F, double s) const {
        std::size_t si = semi_s.size();
        for (std::size_t i = 0; i < semi_s.size(); ++i)
            if (semi_s[i] == s) si = i;
        double acc = 0.0;
        if (si < semi_s.size()) {
            const auto& w = semi_w[si];
            for (int c = 0; c < F.ncomp(); ++c)
                for (std::size_t i = 0; i < total; ++i) acc += w[i] * std::norm(F.comps[c][i]);
        } else {
            for (int c = 0; c < F.ncomp(); ++c)
                for (std::size_t i = 0; i < total; ++i)
                    if (xi2[i] > 0.0) acc += std::pow(xi2[i], s) * std::norm(F.comps[c][i]);
        }
        return acc * u.grid.volume();
    }

    // N_geo evaluated at an arbitrary stage (nodal values `v`, spectrum
    // `vhat`): w_t = inv(P L vhat), then the pointwise geometric terms,
    // transformed back and truncated.
    FourierField nonlinear(const FourierField& vhat, const NodalField& v) {
        FourierField wh(u.grid, ncomp);
        for (int c = 0; c < ncomp; ++c)
            for (std::size_t i = 0; i < total; ++i)
                wh.comps[c][i] = band[i] ? lsym[i] * vhat.comps[c][i] : 0.0;
        NodalField w = inverse_transform(wh);
        NodalField N(u.grid, ncomp);
        const double lam = p.lambda;
        const bool with_cross = (p.equation != Equation::HHHF);
        const double proj = (p.equation == Equation::HWM) ? 0.0
                            : (p.equation == Equation::HHHF) ? 1.0
                                                             : lam;
        if (with_cross && ncomp == 3) {
            for (std::size_t i = 0; i < total; ++i) {
                const double u0 = v.comps[0][i], u1 = v.comps[1][i], u2 = v.comps[2][i];
                const double w0 = w.comps[0][i], w1 = w.comps[1][i], w2 = w.comps[2][i];
                const double s = u0 * w0 + u1 * w1 + u2 * w2;
                N.comps[0][i] = proj * s * u0 + (u1 * w2 - u2 * w1);
                N.comps[1][i] = proj * s * u1 + (u2 * w0 - u0 * w2);
                N.comps[2][i] = proj * s * u2 + (u0 * w1 - u1 * w0);
            }
        } else {
            for (std::size_t i = 0; i < total; ++i) {
                double s = 0.0;
                for (int c = 0; c < ncomp; ++c) s += v.comps[c][i] * w.comps[c][i];
                for (int c = 0; c < ncomp; ++c) N.comps[c][i] = proj * s * v.comps[c][i];
            }
        }
        FourierField Nh = forward_transform(N);
        for (int c = 0; c < ncomp; ++c)
            for (std::size_t i = 0; i < total; ++i)
                if (!band[i]) Nh.comps[c][i] = 0.0;
        return Nh;
    }

    double rate_from(const FourierField& vhat, const FourierField& Nh) const {
        double acc = 0.0;
        for (int c = 0; c < ncomp; ++c)
            for (std::size_t i = 0; i < total; ++i)
                acc += std::norm(csym[i] * vhat.comps[c][i] + Nh.comps[c][i]);
        return acc * u.grid.volume();
    }

    BoundaryVals boundary(const FourierField& vhat, const FourierField& Nh) {
        BoundaryVals bv;
        bv.t = t;
        bv.rate = rate_from(vhat, Nh);
        bv.integral_semis_sq.reserve(p.integral_seminorms.size());
        for (double s : p.integral_seminorms) bv.integral_semis_sq.push_back(seminorm_sq(vhat, s));
        DiagnosticsRow& r = bv.proto;
        r.t = t;
        const double h2 = seminorm_sq(vhat, 0.5);
        r.E = 0.5 * h2;
        r.E_eps = r.E + (p.epsilon > 0.0
                             ? 0.5 * p.epsilon * seminorm_sq(vhat, static_cast<double>(p.nu))
                             : 0.0);
        for (double s : p.row_seminorms) r.seminorms.emplace_back(s, std::sqrt(seminorm_sq(vhat, s)));
        std::sort(r.seminorms.begin(), r.seminorms.end());
        r.grad_seminorm = std::sqrt(seminorm_sq(vhat, (u.grid.n + 1) / 2.0));
        double d2 = 0.0, dinf = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            double m2 = 0.0;
            for (int c = 0; c < ncomp; ++c) {
                const double d = u.values.comps[c][i] - u.Q[c];
                m2 += d * d;
            }
            d2 += m2;
            dinf = std::max(dinf, m2);
        }
        r.dist_L2 = std::sqrt(d2 * u.grid.cell_volume());
        r.dist_Linf = std::sqrt(dinf);
        return bv;
    }

    void check_finite(const NodalField& v) const {
        for (int c = 0; c < v.ncomp(); ++c)
            for (std::size_t i = 0; i < v.comps[c].size(); ++i)
                if (!std::isfinite(v.comps[c][i])) {
                    std::ostringstream os;
                    os << "non-finite state at t = " << t + p.dt;
                    throw DivergenceError(os.str(), t + p.dt);
                }
    }

    AdvanceInfo do_advance() {
        const FourierField& U = spectrum();
        AdvanceInfo info;
        FourierField unext(u.grid, ncomp);
        if (p.scheme == Scheme::ETDRK2) {
            FourierField Nn = nonlinear(U, u.values);
            info.at_start = boundary(U, Nn);
            FourierField a(u.grid, ncomp);
            for (int c = 0; c < ncomp; ++c)
                for (std::size_t i = 0; i < total; ++i)
                    a.comps[c][i] = exp_c[i] * U.comps[c][i] + dtphi1[i] * Nn.comps[c][i];
            NodalField anod = inverse_transform(a);
            FourierField Na = nonlinear(a, anod);
            for (int c = 0; c < ncomp; ++c)
                for (std::size_t i = 0; i < total; ++i)
                    unext.comps[c][i] =
                        a.comps[c][i] + dtphi2[i] * (Na.comps[c][i] - Nn.comps[c][i]);
        } else {
            auto rhs = [&](const FourierField& vhat, const NodalField& vnod) {
                FourierField k = nonlinear(vhat, vnod);
                for (int c = 0; c < ncomp; ++c)
                    for (std::size_t i = 0; i < total; ++i)
                        k.comps[c][i] += csym[i] * vhat.comps[c][i];
                return k;
            };
            auto stage = [&](const FourierField& base, const FourierField& k, double h) {
                FourierField v(u.grid, ncomp);
                for (int c = 0; c < ncomp; ++c)
                    for (std::size_t i = 0; i < total; ++i)
                        v.comps[c][i] = base.comps[c][i] + h * k.comps[c][i];
                return v;
            };
            FourierField Nn = nonlinear(U, u.values);
            info.at_start = boundary(U, Nn);
            FourierField k1 = Nn;
            for (int c = 0; c < ncomp; ++c)
                for (std::size_t i = 0; i < total; ++i) k1.comps[c][i] += csym[i] * U.comps[c][i];
            FourierField u2 = stage(U, k1, 0.5 * p.dt);
            FourierField k2 = rhs(u2, inverse_transform(u2));
            FourierField u3 = stage(U, k2, 0.5 * p.dt);
            FourierField k3 = rhs(u3, inverse_transform(u3));
            FourierField u4 = stage(U, k3, p.dt);
            FourierField k4 = rhs(u4, inverse_transform(u4));
            for (int c = 0; c < ncomp; ++c)
                for (std::size_t i = 0; i < total; ++i)
                    unext.comps[c][i] = U.comps[c][i] +
                                        (p.dt / 6.0) * (k1.comps[c][i] + 2.0 * k2.comps[c][i] +
                                                        2.0 * k3.comps[c][i] + k4.comps[c][i]);
        }
        NodalField next = inverse_transform(unext);
        check_finite(next);
        if (p.renormalize_each_step) {
            info.drift = renormalize(next, t + p.dt).drift;
        } else {
            info.drift = unit_drift(next);
        }
        u.values = std::move(next);
        uhat.reset();
        t += p.dt;
        return info;
    }
};

Integrator::Integrator(SphereField u0, const SimParams& p)
    : impl_(std::make_unique<Impl>(std::move(u0), p)) {}
Integrator::~Integrator() = default;
Integrator::Integrator(Integrator&&) noexcept = default;
Integrator& Integrator::operator=(Integrator&&) noexcept = default;

const SphereField& Integrator::state() const { return impl_->u; }
double Integrator::time() const { return impl_->t; }
const SimParams& Integrator::params() const { return impl_->p; }
Integrator::AdvanceInfo Integrator::advance() { return impl_->do_advance(); }

BoundaryVals Integrator::boundary_vals() {
    const FourierField& U = impl_->spectrum();
    FourierField Nh = impl_->nonlinear(U, impl_->u.values);
    return impl_->boundary(U, Nh);
}

NodalField assemble_rhs(const SphereField& u, const SimParams& p) {
    p.validate(u.grid.n);
    require_target(u, p.equation);
    // Nodal rhs = inv(c uhat + N^), the same semi-discrete field the
    // integrator advances.
    FourierField U = forward_transform(u.values);
    const auto& g = u.grid;
    ModeTable mt(g);
    const std::size_t total = g.size();
    const int ncomp = u.ncomp();
    std::vector<double> lsym(total), csym(total);
    std::vector<unsigned char> band(total);
    for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
        const double f0 = mt.freq[0][i0], f1 = mt.freq[1][i1], f2 = mt.freq[2][i2];
        const double x2 = f0 * f0 + f1 * f1 + f2 * f2;
        double l = std::sqrt(x2);
        if (p.epsilon > 0.0) l += p.epsilon * ((p.nu == 1) ? x2 : x2 * x2);
        lsym[idx] = l;
        csym[idx] = -p.damping() * l;
        band[idx] = mode_within_band(g, i0, i1, i2, p.dealias_policy) ? 1 : 0;
    });
    FourierField wh(g, ncomp);
    for (int c = 0; c < ncomp; ++c)
        for (std::size_t i = 0; i < total; ++i)
            wh.comps[c][i] = band[i] ? lsym[i] * U.comps[c][i] : 0.0;
    NodalField w = inverse_transform(wh);
    NodalField N(g, ncomp);
    const bool with_cross = (p.equation != Equation::HHHF);
    const double proj = (p.equation == Equation::HWM) ? 0.0
                        : (p.equation == Equation::HHHF) ? 1.0
                                                         : p.lambda;
    for (std::size_t i = 0; i < total; ++i) {
        double s = 0.0;
        for (int c = 0; c < ncomp; ++c) s += u.values.comps[c][i] * w.comps[c][i];
        for (int c = 0; c < ncomp; ++c) N.comps[c][i] = proj * s * u.values.comps[c][i];
        if (with_cross) {
            const double u0 = u.values.comps[0][i], u1 = u.values.comps[1][i], u2 = u.values.comps[2][i];
            const double w0 = w.comps[0][i], w1 = w.comps[1][i], w2 = w.comps[2][i];
            N.comps[0][i] += u1 * w2 - u2 * w1;
            N.comps[1][i] += u2 * w0 - u0 * w2;
            N.comps[2][i] += u0 * w1 - u1 * w0;
        }
    }
    FourierField Nh = forward_transform(N);
    for (int c = 0; c < ncomp; ++c)
        for (std::size_t i = 0; i < total; ++i) {
            if (!band[i]) Nh.comps[c][i] = 0.0;
            Nh.comps[c][i] += csym[i] * U.comps[c][i];
        }
    return inverse_transform(Nh);
}

NodalField rhs_hllg(const SphereField& u, double lambda, DealiasPolicy pol) {
    SimParams p;
    p.equation = Equation::HLLG;
    p.lambda = lambda;
    p.epsilon = 0.0;
    p.dealias_policy = pol;
    return assemble_rhs(u, p);
}

NodalField rhs_hhhf(const SphereField& u, DealiasPolicy pol) {
    SimParams p;
    p.equation = Equation::HHHF;
    p.lambda = 0.0;
    p.epsilon = 0.0;
    p.dealias_policy = pol;
    return assemble_rhs(u, p);
}

NodalField rhs_llgr(const SphereField& u, double eps, int nu, double lambda, DealiasPolicy pol) {
    SimParams p;
    p.lambda = lambda;
    p.nu = nu;
    p.dealias_policy = pol;
    p.allow_nu_override = true;
    if (eps == 0.0) {
        p.equation = Equation::HLLG;
        p.epsilon = 0.0;
    } else {
        p.equation = Equation::LLGR;
        p.epsilon = eps;
    }
    return assemble_rhs(u, p);
}

double gilbert_residual(const SphereField& u, const NodalField& v, const SimParams& p) {
    if (!(p.lambda > 0.0)) throw ParameterError("gilbert_residual: requires lambda > 0 (beta undefined)");
    require_target(u, Equation::HLLG);
    if (!(v.grid == u.grid) || v.ncomp() != 3)
        throw StructuralError("gilbert_residual: v must be a 3-component field on the same grid");
    const double alpha = p.alpha();
    const double beta = *p.beta();
    const auto& g = u.grid;
    ModeTable mt(g);
    const std::size_t total = g.size();
    FourierField U = forward_transform(u.values);
    for (int c = 0; c < 3; ++c) {
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const double f0 = mt.freq[0][i0], f1 = mt.freq[1][i1], f2 = mt.freq[2][i2];
            const double x2 = f0 * f0 + f1 * f1 + f2 * f2;
            double l = std::sqrt(x2);
            if (p.epsilon > 0.0) l += p.epsilon * ((p.nu == 1) ? x2 : x2 * x2);
            U.comps[c][idx] *= mode_within_band(g, i0, i1, i2, p.dealias_policy) ? l : 0.0;
        });
    }
    NodalField w = inverse_transform(U);
    double acc = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        double r[3];
        const double u0 = u.values.comps[0][i], u1 = u.values.comps[1][i], u2 = u.values.comps[2][i];
        double h0 = alpha * v.comps[0][i] + w.comps[0][i];
        double h1 = alpha * v.comps[1][i] + w.comps[1][i];
        double h2 = alpha * v.comps[2][i] + w.comps[2][i];
        r[0] = beta * v.comps[0][i] - (u1 * h2 - u2 * h1);
        r[1] = beta * v.comps[1][i] - (u2 * h0 - u0 * h2);
        r[2] = beta * v.comps[2][i] - (u0 * h1 - u1 * h0);
        acc += r[0] * r[0] + r[1] * r[1] + r[2] * r[2];
    }
    return std::sqrt(acc * g.cell_volume());
}

StepReport step(SphereField& u, const SimParams& p) {
    Integrator integ(std::move(u), p);
    auto info = integ.advance();
    u = integ.state();
    return StepReport{info.drift};
}

double TrajectoryRecord::integral_at(std::size_t row, double s) const {
    if (row >= integrals.size()) throw DataError("integral_at: row out of range");
    for (std::size_t i = 0; i < integral_s.size(); ++i)
        if (std::abs(integral_s[i] - s) < 1e-12) return integrals[row][i];
    throw DataError("integral_at: seminorm order not accumulated for this trajectory");
}

TrajectoryRecord run(const SphereField& u0, const SimParams& p, const RowSink& sink) {
    p.validate(u0.grid.n);
    Integrator integ(u0, p);
    long nsteps = std::llround(p.T / p.dt);
    if (nsteps < 1) nsteps = 1;

    TrajectoryRecord rec;
    rec.params = p;
    rec.n = u0.grid.n;
    rec.integral_s = p.integral_seminorms;

    double D = 0.0;
    std::vector<double> I(p.integral_seminorms.size(), 0.0);
    std::optional<BoundaryVals> prev;
    std::vector<double> drifts(static_cast<std::size_t>(nsteps) + 1, 0.0);

    auto arrive = [&](const BoundaryVals& bv) {
        if (prev) {
            D += 0.5 * p.dt * (prev->rate + bv.rate);
            for (std::size_t i = 0; i < I.size(); ++i)
                I[i] += 0.5 * p.dt * (prev->integral_semis_sq[i] + bv.integral_semis_sq[i]);
        }
        prev = bv;
    };
    auto emit = [&](long boundary_idx) {
        DiagnosticsRow row = prev->proto;
        row.dissipation_integral = p.alpha() * D;
        row.constraint_drift = drifts[static_cast<std::size_t>(boundary_idx)];
        rec.rows.push_back(row);
        rec.integrals.push_back(I);
        rec.dissipation_raw.push_back(D);
        if (sink) sink(row);
    };

    for (long k = 1; k <= nsteps; ++k) {
        auto info = integ.advance();
        arrive(info.at_start);
        drifts[static_cast<std::size_t>(k)] = info.drift;
        const long j = k - 1;
        if (j % p.sample_every == 0) emit(j);
    }
    arrive(integ.boundary_vals());
    emit(nsteps);
    rec.final_state = integ.state();
    return rec;
}

}  // namespace hllg
