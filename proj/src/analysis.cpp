#include "hllg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "hllg/parallel.hpp"
#include "hllg/rng.hpp"

namespace hllg {

std::string to_string(InequalityId id) {
    switch (id) {
        case InequalityId::CRW: return "crw";
        case InequalityId::KatoPonce: return "kato_ponce";
        case InequalityId::GN: return "gn";
        case InequalityId::Sob1: return "sob1";
        case InequalityId::Sob2: return "sob2";
        case InequalityId::GN2: return "gn2";
        case InequalityId::GN1: return "gn1";
        case InequalityId::Agmon: return "agmon";
        case InequalityId::Interp: return "interp";
    }
    return "?";
}

InequalityId inequality_from_string(const std::string& s) {
    for (InequalityId id : all_inequalities())
        if (to_string(id) == s) return id;
    throw ParameterError("unknown inequality id '" + s + "'");
}

std::vector<InequalityId> all_inequalities() {
    return {InequalityId::CRW,  InequalityId::KatoPonce, InequalityId::GN,
            InequalityId::Sob1, InequalityId::Sob2,      InequalityId::GN2,
            InequalityId::GN1,  InequalityId::Agmon,     InequalityId::Interp};
}

int inequality_arity(InequalityId id) {
    return (id == InequalityId::CRW || id == InequalityId::KatoPonce) ? 2 : 1;
}

bool inequality_valid_for(InequalityId id, int n) {
    if (id == InequalityId::Sob1) return n >= 2;  // L^(2n/(n-1)) needs n >= 2
    return n >= 1 && n <= 3;
}

namespace {

constexpr double kDegenerateTol = 1e-14;

double grad_lp(const NodalField& f, double p) {
    FourierField F = forward_transform(f);
    NodalField g(f.grid, f.grid.n * f.ncomp());
    int slot = 0;
    for (int c = 0; c < f.ncomp(); ++c) {
        FourierField fc(f.grid, 1);
        fc.comps[0] = F.comps[c];
        for (int j = 0; j < f.grid.n; ++j)
            g.comps[slot++] = inverse_transform(derivative(fc, j)).comps[0];
    }
    return lp_norm(g, p);
}

double hessian_l2(const NodalField& f) {
    FourierField F = forward_transform(f);
    NodalField h(f.grid, f.grid.n * f.grid.n * f.ncomp());
    int slot = 0;
    for (int c = 0; c < f.ncomp(); ++c) {
        FourierField fc(f.grid, 1);
        fc.comps[0] = F.comps[c];
        for (int j = 0; j < f.grid.n; ++j) {
            FourierField dj = derivative(fc, j);
            for (int k = 0; k < f.grid.n; ++k)
                h.comps[slot++] = inverse_transform(derivative(dj, k)).comps[0];
        }
    }
    return lp_norm(h, 2.0);
}

// Scalar [(-L)^(1/4), a] f = (-L)^(1/4)(a f) - a (-L)^(1/4) f.
NodalField quarter_commutator_scalar(const NodalField& a, const NodalField& f) {
    NodalField prod(a.grid, 1);
    for (std::size_t i = 0; i < a.grid.size(); ++i)
        prod.comps[0][i] = a.comps[0][i] * f.comps[0][i];
    NodalField t1 = inverse_transform(fractional_laplacian(forward_transform(prod), 0.25));
    NodalField qf = inverse_transform(fractional_laplacian(forward_transform(f), 0.25));
    NodalField out(a.grid, 1);
    for (std::size_t i = 0; i < a.grid.size(); ++i)
        out.comps[0][i] = t1.comps[0][i] - a.comps[0][i] * qf.comps[0][i];
    return out;
}

}  // namespace

RatioValue inequality_ratio(InequalityId id, const std::vector<NodalField>& fields) {
    if (static_cast<int>(fields.size()) != inequality_arity(id))
        throw ParameterError("inequality_ratio: wrong number of sample fields");
    const SpectralGrid& g = fields[0].grid;
    const int n = g.n;
    if (!inequality_valid_for(id, n))
        throw ParameterError("inequality " + to_string(id) + " has no exponent set for n = " +
                             std::to_string(n));
    RatioValue v;
    switch (id) {
        case InequalityId::CRW: {
            const NodalField& b = fields[0];
            const NodalField& f = fields[1];
            double lhs = 0.0;
            for (int j = 0; j < n; ++j)
                lhs = std::max(lhs,
                               lp_norm(riesz_commutator(j, b, f, DealiasPolicy::quadratic), 2.0));
            v.lhs = lhs;
            v.rhs = bmo_norm(b) * lp_norm(f, 2.0);
            break;
        }
        case InequalityId::KatoPonce: {
            const NodalField& a = fields[0];
            const NodalField& f = fields[1];
            v.lhs = lp_norm(quarter_commutator_scalar(a, f), 2.0);
            NodalField qa = inverse_transform(fractional_laplacian(forward_transform(a), 0.25));
            v.rhs = lp_norm(qa, 4.0) * lp_norm(f, 4.0);  // 1/2 = 1/4 + 1/4
            break;
        }
        case InequalityId::GN:
            v.lhs = grad_lp(fields[0], 4.0);
            v.rhs = std::sqrt(grad_lp(fields[0], n) * hessian_l2(fields[0]));
            break;
        case InequalityId::Sob1:
            v.lhs = lp_norm(fields[0], 2.0 * n / (n - 1.0));
            v.rhs = sobolev_seminorm(fields[0], 0.5);
            break;
        case InequalityId::Sob2:
            v.lhs = lp_norm(fields[0], 2.0 * n);
            v.rhs = sobolev_seminorm(fields[0], (n - 1) / 2.0);
            break;
        case InequalityId::GN2: {
            const double l = lp_norm(fields[0], 4.0 * n);
            v.lhs = l * l;
            v.rhs = lp_norm(fields[0], 2.0 * n) * grad_lp(fields[0], n);
            break;
        }
        case InequalityId::GN1: {
            const double l = lp_norm(fields[0], 4.0 * n / (2.0 * n - 1.0));
            const double l2 = lp_norm(fields[0], 2.0);
            const double h = sobolev_seminorm(fields[0], 0.5);
            v.lhs = l * l * l * l;
            v.rhs = l2 * l2 * h * h;
            break;
        }
        case InequalityId::Agmon: {
            v.lhs = lp_norm(fields[0], kLpInfinity);
            const double th = 1.0 / (n + 1.0);
            v.rhs = std::pow(lp_norm(fields[0], 2.0), th) *
                    std::pow(sobolev_seminorm(fields[0], (n + 1) / 2.0), 1.0 - th);
            break;
        }
        case InequalityId::Interp:
            v.lhs = sobolev_seminorm(fields[0], 0.5);
            v.rhs = std::sqrt(sobolev_seminorm(fields[0], 0.0) * sobolev_seminorm(fields[0], 1.0));
            break;
    }
    if (v.rhs < kDegenerateTol) {
        v.degenerate = true;
        v.ratio = 0.0;
    } else {
        v.ratio = v.lhs / v.rhs;
    }
    return v;
}

NodalField sample_mean_zero(const SpectralGrid& g, int ncomp, const SamplerSpec& spec,
                            std::uint64_t trial) {
    Rng rng(Rng::substream(spec.seed_base, trial));
    FourierField F(g, ncomp);
    for (int c = 0; c < ncomp; ++c) {
        for_each_index(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const int k0 = g.mode(0, i0), k1 = g.mode(1, i1), k2 = g.mode(2, i2);
            if (std::abs(k0) > spec.kmax || std::abs(k1) > spec.kmax || std::abs(k2) > spec.kmax)
                return;
            if (k0 == 0 && k1 == 0 && k2 == 0) return;
            const bool canonical =
                (k0 > 0) || (k0 == 0 && k1 > 0) || (k0 == 0 && k1 == 0 && k2 > 0);
            if (!canonical) return;
            const std::complex<double> z(rng.next_gaussian(), rng.next_gaussian());
            F.comps[c][idx] = 0.25 * spec.amplitude * z;
            const std::size_t mirror =
                (static_cast<std::size_t>((g.dims[0] - i0) % g.dims[0]) * g.dims[1] +
                 (g.dims[1] - i1) % g.dims[1]) *
                    g.dims[2] +
                (g.dims[2] - i2) % g.dims[2];
            F.comps[c][mirror] = std::conj(F.comps[c][idx]);
        });
    }
    return inverse_transform(F);
}

RatioReport verify_ratio(const SpectralGrid& g, InequalityId id, const SamplerSpec& spec,
                         long trials, int threads) {
    if (trials < 1) throw ParameterError("verify_ratio: trials must be >= 1");
    if (!inequality_valid_for(id, g.n))
        throw ParameterError("inequality " + to_string(id) + " has no exponent set for n = " +
                             std::to_string(g.n));
    for (int j = 0; j < g.n; ++j)
        if (2 * spec.kmax >= g.dims[j])
            throw ParameterError("verify_ratio: sampler band exceeds the grid Nyquist");

    const int arity = inequality_arity(id);
    struct TrialOut {
        double ratio = 0.0, ratio_fine = 0.0;
        bool degenerate = false, inconsistent = false;
    };
    std::vector<TrialOut> out(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
        std::vector<NodalField> fields;
        fields.reserve(arity);
        for (int a = 0; a < arity; ++a)
            fields.push_back(sample_mean_zero(g, 1, spec, t * arity + a));
        RatioValue coarse = inequality_ratio(id, fields);
        std::vector<NodalField> fine;
        fine.reserve(arity);
        for (const auto& f : fields) fine.push_back(refine(f, 2));
        RatioValue refined = inequality_ratio(id, fine);
        TrialOut& o = out[t];
        o.ratio = coarse.ratio;
        o.ratio_fine = refined.ratio;
        o.degenerate = coarse.degenerate;
        o.inconsistent = coarse.degenerate && coarse.lhs > 1e-12;
    });

    RatioReport rep;
    rep.id = to_string(id);
    rep.n = g.n;
    rep.trials = trials;
    rep.sampler = spec;
    for (const auto& o : out) {
        rep.max_ratio = std::max(rep.max_ratio, o.ratio);
        rep.ratio_at_refinement = std::max(rep.ratio_at_refinement, o.ratio_fine);
        if (o.degenerate) ++rep.degenerate;
        if (o.inconsistent) ++rep.degenerate_inconsistent;
    }
    return rep;
}

std::string ratio_report_csv_header() {
    return "id,n,trials,degenerate,degenerate_inconsistent,max_ratio,ratio_at_refinement,"
           "kmax,amplitude,seed_base";
}

std::string ratio_report_csv_row(const RatioReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << r.id << ',' << r.n << ',' << r.trials << ',' << r.degenerate << ','
       << r.degenerate_inconsistent << ',' << r.max_ratio << ',' << r.ratio_at_refinement << ','
       << r.sampler.kmax << ',' << r.sampler.amplitude << ',' << r.sampler.seed_base;
    return os.str();
}

std::string ratio_report_text(const RatioReport& r) {
    std::ostringstream os;
    os.precision(6);
    const double var = (r.max_ratio > 0.0)
                           ? std::abs(r.ratio_at_refinement - r.max_ratio) / r.max_ratio
                           : 0.0;
    os << r.id << " (n=" << r.n << "): max ratio " << r.max_ratio << " over " << r.trials
       << " trials (" << r.degenerate << " degenerate";
    if (r.degenerate_inconsistent > 0) os << ", " << r.degenerate_inconsistent << " INCONSISTENT";
    os << "); refined " << r.ratio_at_refinement << " (" << 100.0 * var << "% change)";
    return os.str();
}

LedgerReport check_energy_identity(const TrajectoryRecord& rec) {
    if (rec.rows.empty()) throw DataError("check_energy_identity: empty trajectory");
    if (rec.params.alpha() <= 0.0)
        throw DataError("check_energy_identity: the identity needs a dissipative equation");
    const double e0 = rec.rows.front().E_eps;
    LedgerReport rep;
    for (const auto& row : rec.rows) {
        const double defect = std::abs(row.E_eps + row.dissipation_integral - e0);
        const double rel = (e0 > 1e-14) ? defect / e0 : defect;
        rep.defect_sup = std::max(rep.defect_sup, rel);
        rep.defect_final = rel;
    }
    return rep;
}

double energy_identity_order(const TrajectoryRecord& coarse, const TrajectoryRecord& fine) {
    const double dc = check_energy_identity(coarse).defect_final;
    const double df = check_energy_identity(fine).defect_final;
    if (df <= 0.0) return 0.0;
    return dc / df;
}

MonotoneReport check_monotone_estimates(const TrajectoryRecord& rec, int k, double tol) {
    if (k < 1 || k > rec.n + 1)
        throw ParameterError("check_monotone_estimates: k must lie in 1..n+1");
    if (rec.rows.empty()) throw DataError("check_monotone_estimates: empty trajectory");
    const double s_sup = k / 2.0;
    const double s_eps = k / 2.0 + rec.params.nu;
    const double s_int = (k + 1) / 2.0;
    auto row_seminorm = [&](const DiagnosticsRow& row, double s) {
        for (const auto& [ss, val] : row.seminorms)
            if (std::abs(ss - s) < 1e-12) return val;
        throw DataError("check_monotone_estimates: seminorm s = " + std::to_string(s) +
                        " not sampled");
    };
    const double h0 = row_seminorm(rec.rows.front(), s_sup);
    MonotoneReport rep;
    rep.k = k;
    rep.rhs = h0 * h0;
    rep.slack_min = rep.rhs;
    const double lam = rec.params.damping();
    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
        const double hs = row_seminorm(rec.rows[i], s_sup);
        double integral = rec.integral_at(i, s_int);
        if (rec.params.epsilon > 0.0) integral += rec.params.epsilon * rec.integral_at(i, s_eps);
        const double lhs = hs * hs + lam * integral;
        rep.lhs_sup = std::max(rep.lhs_sup, lhs);
        rep.slack_min = std::min(rep.slack_min, rep.rhs - lhs);
        if (lhs > rep.rhs + tol * std::max(rep.rhs, 1e-30) && rep.holds) {
            rep.holds = false;
            rep.first_violation_time = rec.rows[i].t;
        }
    }
    return rep;
}

L2GrowthReport check_L2_growth(const TrajectoryRecord& rec) {
    if (rec.rows.empty()) throw DataError("check_L2_growth: empty trajectory");
    L2GrowthReport rep;
    auto h_half = [](const DiagnosticsRow& row) {
        for (const auto& [s, val] : row.seminorms)
            if (std::abs(s - 0.5) < 1e-12) return val;
        throw DataError("check_L2_growth: H^(1/2) seminorm not sampled");
    };
    if (rec.n == 1) {
        const double h0 = h_half(rec.rows.front());
        const double d0 = rec.rows.front().dist_L2;
        const double base = d0 * d0 + h0 * h0;
        if (base < 1e-28) {
            rep.trivial = true;
            return rep;
        }
        for (const auto& row : rec.rows) {
            if (row.t <= 0.0) continue;
            const double h = h_half(row);
            const double d = row.dist_L2 * row.dist_L2 + h * h;
            rep.fitted_constant = std::max(rep.fitted_constant, std::log(d / base) / row.t);
        }
        rep.fitted_constant = std::max(rep.fitted_constant, 0.0);
    } else {
        const double d0 = rec.rows.front().dist_L2;
        if (d0 < 1e-14) {
            rep.trivial = true;
            return rep;
        }
        for (const auto& row : rec.rows)
            rep.fitted_constant =
                std::max(rep.fitted_constant, (row.dist_L2 * row.dist_L2) / (d0 * d0));
    }
    return rep;
}

DecayReport check_decay(const TrajectoryRecord& rec, double decay_threshold) {
    if (rec.rows.size() < 3) throw DataError("check_decay: trajectory too short");
    DecayReport rep;
    const double g0 = rec.rows.front().grad_seminorm;
    const double gT = rec.rows.back().grad_seminorm;
    rep.dist_linf_final = rec.rows.back().dist_Linf;
    if (g0 < 1e-14) {
        rep.status = DecayStatus::decayed;  // started at the ground state
        rep.grad_ratio = 0.0;
        return rep;
    }
    rep.grad_ratio = gT / g0;

    // Averaged bound over the second half of the run.
    const double T = rec.rows.back().t;
    const double T0 = T / 2.0;
    double avg = 0.0, span = 0.0;
    double gT0 = g0;
    bool past = false;
    for (std::size_t i = 1; i < rec.rows.size(); ++i) {
        const auto& a = rec.rows[i - 1];
        const auto& b = rec.rows[i];
        if (b.t < T0) continue;
        if (!past) {
            past = true;
            gT0 = a.grad_seminorm;
        }
        const double dt = b.t - a.t;
        avg += 0.5 * dt * (a.grad_seminorm * a.grad_seminorm + b.grad_seminorm * b.grad_seminorm);
        span += dt;
    }
    if (span > 0.0) {
        avg /= span;
        const double lhs = gT * gT - gT0 * gT0;
        rep.averaged_bound_holds = lhs <= avg + 1e-9 * (std::abs(avg) + g0 * g0);
    }

    // Agmon ratio along the trajectory (torus constant reported, not asserted).
    const int n = rec.n;
    for (const auto& row : rec.rows) {
        const double denom = 2.0 * std::pow(row.dist_L2, 1.0 / (n + 1.0)) *
                             std::pow(row.grad_seminorm, n / (n + 1.0));
        if (denom > 1e-14)
            rep.agmon_max_ratio = std::max(rep.agmon_max_ratio, row.dist_Linf / denom);
    }

    if (rep.grad_ratio <= decay_threshold) {
        rep.status = DecayStatus::decayed;
    } else {
        const std::size_t mid = rec.rows.size() / 2;
        rep.status = (gT < rec.rows[mid].grad_seminorm) ? DecayStatus::inconclusive
                                                        : DecayStatus::not_decayed;
    }
    return rep;
}

StabilityReport check_stability(const SphereField& u0, double delta0, const SimParams& p,
                                std::uint64_t seed) {
    p.validate(u0.grid.n);
    StabilityReport rep;
    SphereField v0 = u0;
    if (delta0 > 0.0) {
        // Band-limited noise projected tangent to u0 pointwise, scaled to
        // ||w(0)||_L2 = delta0, then renormalized.
        NodalField noise = sample_mean_zero(u0.grid, u0.ncomp(), SamplerSpec{4, 1.0, seed}, 0);
        const std::size_t total = u0.grid.size();
        for (std::size_t i = 0; i < total; ++i) {
            double s = 0.0;
            for (int c = 0; c < u0.ncomp(); ++c) s += noise.comps[c][i] * u0.values.comps[c][i];
            for (int c = 0; c < u0.ncomp(); ++c) noise.comps[c][i] -= s * u0.values.comps[c][i];
        }
        const double nn = std::sqrt(inner_product(noise, noise));
        if (nn <= 0.0) throw ParameterError("check_stability: degenerate perturbation");
        NodalField pert = u0.values;
        for (int c = 0; c < u0.ncomp(); ++c)
            for (std::size_t i = 0; i < total; ++i)
                pert.comps[c][i] += (delta0 / nn) * noise.comps[c][i];
        v0 = make_sphere_field(u0.grid, u0.m, u0.Q, std::move(pert));
    }

    Integrator a(u0, p), b(v0, p);
    auto w_norm = [&]() {
        double acc = 0.0;
        for (int c = 0; c < u0.ncomp(); ++c)
            for (std::size_t i = 0; i < u0.grid.size(); ++i) {
                const double d = a.state().values.comps[c][i] - b.state().values.comps[c][i];
                acc += d * d;
            }
        return std::sqrt(acc * u0.grid.cell_volume());
    };
    auto bit_equal = [&]() {
        for (int c = 0; c < u0.ncomp(); ++c)
            for (std::size_t i = 0; i < u0.grid.size(); ++i)
                if (a.state().values.comps[c][i] != b.state().values.comps[c][i]) return false;
        return true;
    };

    rep.delta_measured = w_norm();
    rep.w_norms.emplace_back(0.0, rep.delta_measured);
    long nsteps = std::llround(p.T / p.dt);
    if (nsteps < 1) nsteps = 1;
    rep.bitwise_equal = true;
    for (long k = 1; k <= nsteps; ++k) {
        a.advance();
        b.advance();
        if (k % p.sample_every == 0 || k == nsteps) {
            rep.w_norms.emplace_back(a.time(), w_norm());
            if (delta0 == 0.0) rep.bitwise_equal = rep.bitwise_equal && bit_equal();
        }
    }
    if (delta0 > 0.0) {
        rep.bitwise_equal = false;
        const double d = std::max(rep.delta_measured, 1e-300);
        double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
        long cnt = 0;
        for (const auto& [t, w] : rep.w_norms) {
            rep.sup_ratio = std::max(rep.sup_ratio, w / d);
            if (w > 0.0) {
                const double y = std::log(w);
                sum_t += t;
                sum_y += y;
                sum_tt += t * t;
                sum_ty += t * y;
                ++cnt;
            }
        }
        const double det = cnt * sum_tt - sum_t * sum_t;
        if (cnt >= 2 && std::abs(det) > 1e-30)
            rep.envelope_rate = (cnt * sum_ty - sum_t * sum_y) / det;
    }
    return rep;
}

}  // namespace hllg
