#pragma once

#include <utility>
#include <vector>

namespace hllg {

// One per-time-sample record of the energy/seminorm ledger.
struct DiagnosticsRow {
    double t = 0.0;
    double E = 0.0;      // half-Dirichlet energy
    double E_eps = 0.0;  // regularized energy
    std::vector<std::pair<double, double>> seminorms;  // (s, ||u||_{H^s}), sorted by s
    double dist_L2 = 0.0;
    double dist_Linf = 0.0;
    double dissipation_integral = 0.0;  // alpha * int ||d_t u||^2 dt
    double constraint_drift = 0.0;      // pre-renormalization drift of the arriving step
    double grad_seminorm = 0.0;         // ||grad u||_{H^((n-1)/2)} = ||u||_{H^((n+1)/2)}
};

}  // namespace hllg
