#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hllg/diagnostics.hpp"
#include "hllg/field.hpp"
#include "hllg/norms.hpp"

namespace hllg {

enum class Equation { HLLG, HHHF, HWM, LLGR };
enum class Scheme { ETDRK2, RK4 };

std::string to_string(Equation eq);
std::string to_string(Scheme s);

struct SimParams {
    Equation equation = Equation::HLLG;
    double lambda = 1.0;   // damping; > 0 for HLLG/LLGR, == 0 for HWM
    double epsilon = 0.0;  // regularization; > 0 required for LLGR
    int nu = 1;            // regularizer order, 1 or 2
    double dt = 1e-3;
    double T = 1.0;
    Scheme scheme = Scheme::ETDRK2;
    DealiasPolicy dealias_policy = DealiasPolicy::cubic;
    bool renormalize_each_step = true;
    int sample_every = 1;
    std::vector<double> row_seminorms = {0.5};   // H^s columns recorded per row
    std::vector<double> integral_seminorms;      // s with int ||u||^2_{H^s} dt accumulated
    bool allow_nu_override = false;              // lifts the nu-per-dimension rule for LLGR

    // Coefficient of int ||d_t u||^2 dt in the dissipation ledger.
    double alpha() const;
    // beta = alpha/lambda; empty (flagged) at lambda = 0.
    std::optional<double> beta() const;
    // Damping coefficient in front of the linear operator L.
    double damping() const;
    void validate(int n) const;

    bool operator==(const SimParams&) const = default;
};

// Spec-facing right-hand sides, assembled nodally with the stated dealiasing.
NodalField assemble_rhs(const SphereField& u, const SimParams& p);
NodalField rhs_hllg(const SphereField& u, double lambda,
                    DealiasPolicy pol = DealiasPolicy::cubic);
NodalField rhs_hhhf(const SphereField& u, DealiasPolicy pol = DealiasPolicy::cubic);
NodalField rhs_llgr(const SphereField& u, double eps, int nu, double lambda,
                    DealiasPolicy pol = DealiasPolicy::cubic);

// L2 norm of beta*v - u x (alpha*v + L u) with v standing in for d_t u.
double gilbert_residual(const SphereField& u, const NodalField& v, const SimParams& p);

struct StepReport {
    double drift = 0.0;  // max | |u|-1 | before renormalization
};

// Values describing the state at one step boundary, produced as a byproduct
// of stepping (no extra transforms).
struct BoundaryVals {
    double t = 0.0;
    double rate = 0.0;  // ||d_t u||^2_{L2} from the assembled rhs
    std::vector<double> integral_semis_sq;
    DiagnosticsRow proto;  // dissipation/drift columns filled by the caller
};

// Advances one trajectory; owns scratch buffers and the exponential factors.
class Integrator {
  public:
    Integrator(SphereField u0, const SimParams& p);
    ~Integrator();
    Integrator(Integrator&&) noexcept;
    Integrator& operator=(Integrator&&) noexcept;

    const SphereField& state() const;
    double time() const;
    const SimParams& params() const;

    struct AdvanceInfo {
        BoundaryVals at_start;
        double drift = 0.0;
    };
    AdvanceInfo advance();

    // Boundary values of the current state (used once, for the final sample).
    BoundaryVals boundary_vals();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

StepReport step(SphereField& u, const SimParams& p);

// Full trajectory bookkeeping for the analysis checks. `integrals[i][j]` is
// the cumulative int_0^{t_i} ||u||^2_{H^{s_j}} dt at row i (trapezoid, per
// step); `dissipation_raw` is int ||d_t u||^2 dt without the alpha factor.
struct TrajectoryRecord {
    std::vector<DiagnosticsRow> rows;
    std::vector<double> integral_s;
    std::vector<std::vector<double>> integrals;
    std::vector<double> dissipation_raw;
    SphereField final_state;
    SimParams params;
    int n = 1;

    double integral_at(std::size_t row, double s) const;
};

using RowSink = std::function<void(const DiagnosticsRow&)>;
TrajectoryRecord run(const SphereField& u0, const SimParams& p, const RowSink& sink = {});

}  // namespace hllg
