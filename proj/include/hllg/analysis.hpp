#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hllg/dynamics.hpp"

namespace hllg {

// Inequalities monitored as empirical ratio tests (LHS/RHS over random
// mean-zero band-limited samples; the torus constants are not asserted,
// only finiteness and stability under refinement).
enum class InequalityId {
    CRW,        // ||[R_j, b] f||_L2 <= C ||b||_BMO ||f||_L2
    KatoPonce,  // ||[(-L)^(1/4), a] f||_L2 <= C ||(-L)^(1/4) a||_L4 ||f||_L4
    GN,         // ||grad f||_L4 <= C ||grad f||_Ln^(1/2) ||grad^2 f||_L2^(1/2)
    Sob1,       // ||f||_L^(2n/(n-1)) <= C ||f||_H^(1/2)        (n >= 2)
    Sob2,       // ||f||_L^(2n) <= C ||f||_H^((n-1)/2)
    GN2,        // ||f||_L^(4n)^2 <= C ||f||_L^(2n) ||grad f||_Ln
    GN1,        // ||f||_L^(4n/(2n-1))^4 <= C ||f||_L2^2 ||f||_H^(1/2)^2
    Agmon,      // ||f||_Linf <= C ||f||_L2^(1/(n+1)) ||f||_H^((n+1)/2)^(n/(n+1))
    Interp,     // ||f||_H^(1/2) <= ||f||_L2^(1/2) ||f||_H^1^(1/2), sharp spectrally
};

std::string to_string(InequalityId id);
InequalityId inequality_from_string(const std::string& s);
std::vector<InequalityId> all_inequalities();
int inequality_arity(InequalityId id);
bool inequality_valid_for(InequalityId id, int n);

// LHS/RHS for one sample; `degenerate` set when RHS < 1e-14 (spec rule).
struct RatioValue {
    double ratio = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool degenerate = false;
};
RatioValue inequality_ratio(InequalityId id, const std::vector<NodalField>& fields);

struct SamplerSpec {
    int kmax = 8;
    double amplitude = 1.0;
    std::uint64_t seed_base = 1;
};

// Mean-zero band-limited Gaussian sample (the inequality sampler).
NodalField sample_mean_zero(const SpectralGrid& g, int ncomp, const SamplerSpec& spec,
                            std::uint64_t trial);

struct RatioReport {
    std::string id;
    int n = 1;
    long trials = 0;
    long degenerate = 0;
    long degenerate_inconsistent = 0;  // RHS ~ 0 but LHS did not vanish
    double max_ratio = 0.0;
    double ratio_at_refinement = 0.0;  // same samples evaluated on the 2x grid
    SamplerSpec sampler;
};

RatioReport verify_ratio(const SpectralGrid& g, InequalityId id, const SamplerSpec& spec,
                         long trials, int threads = 1);
std::string ratio_report_csv_header();
std::string ratio_report_csv_row(const RatioReport& r);
std::string ratio_report_text(const RatioReport& r);

// Lemma-style dissipation ledger: E_eps(u(T)) + alpha int ||d_t u||^2 = E_eps(u0).
struct LedgerReport {
    double defect_sup = 0.0;   // sup_t |E_eps(t) + alpha D(t) - E_eps(0)| / E_eps(0)
    double defect_final = 0.0;
};
LedgerReport check_energy_identity(const TrajectoryRecord& rec);
// Defect ratio coarse/fine for paired dt, dt/2 trajectories (~4 at 2nd order).
double energy_identity_order(const TrajectoryRecord& coarse, const TrajectoryRecord& fine);

// sup_t ||u||^2_{H^(k/2)} + lambda int (eps ||u||^2_{H^(k/2+nu)} + ||u||^2_{H^((k+1)/2)})
// <= ||u0||^2_{H^(k/2)} within tol*RHS.
struct MonotoneReport {
    int k = 1;
    double lhs_sup = 0.0;
    double rhs = 0.0;
    double slack_min = 0.0;  // min over sampled times of RHS - LHS
    bool holds = true;
    double first_violation_time = -1.0;
};
MonotoneReport check_monotone_estimates(const TrajectoryRecord& rec, int k,
                                        double tol = 1e-6);

struct L2GrowthReport {
    // n = 1: smallest c0 with ||u(t)-Q||^2_{H^(1/2)} <= e^(c0 t) ||u0-Q||^2.
    // n >= 2: smallest c with sup_t ||u(t)-Q||^2_{L2} <= c ||u0-Q||^2_{L2}.
    double fitted_constant = 0.0;
    bool trivial = false;  // distances identically zero
};
L2GrowthReport check_L2_growth(const TrajectoryRecord& rec);

enum class DecayStatus { decayed, not_decayed, inconclusive };
struct DecayReport {
    DecayStatus status = DecayStatus::inconclusive;
    double grad_ratio = 0.0;       // grad_seminorm(T) / grad_seminorm(0)
    double dist_linf_final = 0.0;  // ||u(T)-Q||_Linf
    bool averaged_bound_holds = true;  // [grad^2]_{T0}^T <= mean over [T0,T]
    double agmon_max_ratio = 0.0;      // sup_t of the Agmon ratio along the run
};
DecayReport check_decay(const TrajectoryRecord& rec, double decay_threshold = 1e-3);

struct StabilityReport {
    bool bitwise_equal = false;   // delta0 = 0 path
    double delta_measured = 0.0;  // ||w(0)||_L2 after renormalization
    double sup_ratio = 0.0;       // sup_t ||w(t)|| / delta
    double envelope_rate = 0.0;   // least-squares slope of ln ||w(t)||
    std::vector<std::pair<double, double>> w_norms;  // (t, ||w||_L2)
};
StabilityReport check_stability(const SphereField& u0, double delta0, const SimParams& p,
                                std::uint64_t seed = 424242);

}  // namespace hllg
