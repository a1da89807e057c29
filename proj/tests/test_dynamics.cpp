#include <doctest.h>

#include <cmath>

#include "hllg/dynamics.hpp"
#include "testutil.hpp"

using namespace hllg;
using testutil::kPi;

namespace {

SphereField constant_Q(const SpectralGrid& g) {
    NodalField v(g, 3);
    for (std::size_t i = 0; i < g.size(); ++i) v.comps[2][i] = 1.0;
    return make_sphere_field(g, 2, {0.0, 0.0, 1.0}, std::move(v));
}

double l2_norm(const NodalField& f) { return std::sqrt(inner_product(f, f)); }

double state_l2_diff(const SphereField& a, const SphereField& b) {
    double acc = 0.0;
    for (int c = 0; c < a.ncomp(); ++c)
        for (std::size_t i = 0; i < a.grid.size(); ++i) {
            const double d = a.values.comps[c][i] - b.values.comps[c][i];
            acc += d * d;
        }
    return std::sqrt(acc * a.grid.cell_volume());
}

SimParams hllg_params(double lambda = 1.0) {
    SimParams p;
    p.equation = Equation::HLLG;
    p.lambda = lambda;
    return p;
}

}  // namespace

TEST_CASE("rhs vanishes on constant maps for every equation") {
    auto g = testutil::grid1(64);
    SphereField Q = constant_Q(g);
    CHECK(testutil::max_abs(rhs_hllg(Q, 1.0)) < 1e-15);
    CHECK(testutil::max_abs(rhs_hhhf(Q)) < 1e-15);
    CHECK(testutil::max_abs(rhs_llgr(Q, 0.01, 1, 1.0)) < 1e-15);
}

TEST_CASE("assembled rhs is pointwise tangent on smooth data") {
    for (int n : {1, 2}) {
        const int N = (n == 1) ? 256 : 64;
        auto g = testutil::grid_n(n, N);
        SphereField u = testutil::random_sphere_field(g, 0.01, std::max(1, N / 32), 600 + n);
        for (auto rhs : {rhs_hllg(u, 1.0), rhs_hhhf(u), rhs_llgr(u, 1e-2, n == 1 ? 1 : 2, 1.0)}) {
            double tangency = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                double s = 0.0;
                for (int c = 0; c < 3; ++c) s += rhs.comps[c][i] * u.values.comps[c][i];
                tangency = std::max(tangency, std::abs(s));
            }
            // Spec invariant: max |rhs.u| <= 1e-10 ||rhs||_inf (dealiasing tail).
            CHECK(tangency <= 1e-10 * testutil::max_abs(rhs) + 1e-13);
        }
    }
}

TEST_CASE("the damping term equals -lambda (1 - Pi_u) of the half-Laplacian") {
    auto g = testutil::grid1(256);
    SphereField u = testutil::random_sphere_field(g, 0.05, 8, 11);
    NodalField r2 = rhs_hllg(u, 2.0);
    NodalField r1 = rhs_hllg(u, 1.0);
    // rhs(2) - rhs(1) isolates one lambda-unit of the dissipative part.
    NodalField lam_term(g, 3);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            lam_term.comps[c][i] = r2.comps[c][i] - r1.comps[c][i];
    FourierField uhat = forward_transform(u.values);
    NodalField w = inverse_transform(dealias(fractional_laplacian(uhat, 0.5), DealiasPolicy::cubic));
    NodalField expect = project_tangent(u, w);
    double defect = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            defect = std::max(defect, std::abs(lam_term.comps[c][i] + expect.comps[c][i]));
    CHECK(defect < 1e-10 * std::max(1.0, testutil::max_abs(expect)));
}

TEST_CASE("heat flow rhs equals minus the tangent part of the half-Laplacian") {
    auto g = testutil::grid1(256);
    SphereField u = testutil::random_sphere_field(g, 0.05, 8, 12);
    NodalField r = rhs_hhhf(u);
    NodalField w =
        inverse_transform(dealias(fractional_laplacian(forward_transform(u.values), 0.5),
                                  DealiasPolicy::cubic));
    NodalField expect = project_tangent(u, w);
    double defect = 0.0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            defect = std::max(defect, std::abs(r.comps[c][i] + expect.comps[c][i]));
    CHECK(defect < 1e-10 * std::max(1.0, testutil::max_abs(expect)));
}

TEST_CASE("heat flow extends to S^m targets while the Hamiltonian flows require m = 2") {
    auto g = testutil::grid1(64);
    auto r = make_perturbation(g, {1.0, 0.0, 0.0, 0.0}, 0.05, 4, 9);  // m = 3
    CHECK(r.u.m == 3);
    NodalField rhs = rhs_hhhf(r.u);
    CHECK(rhs.ncomp() == 4);
    CHECK(testutil::max_abs(rhs) > 0.0);
    CHECK_THROWS_AS((void)rhs_hllg(r.u, 1.0), UnsupportedTargetError);
}

TEST_CASE("llgr reduces to hllg at eps = 0 and is linear in eps") {
    auto g = testutil::grid1(256);
    SphereField u = testutil::random_sphere_field(g, 0.05, 8, 13);
    NodalField base = rhs_hllg(u, 1.0);
    NodalField at0 = rhs_llgr(u, 0.0, 1, 1.0);
    CHECK(testutil::max_abs_diff(base, at0) < 1e-12 * std::max(1.0, testutil::max_abs(base)));

    NodalField d1(g, 3), d2(g, 3);
    NodalField r1 = rhs_llgr(u, 1e-3, 1, 1.0);
    NodalField r2 = rhs_llgr(u, 2e-3, 1, 1.0);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i) {
            d1.comps[c][i] = r1.comps[c][i] - base.comps[c][i];
            d2.comps[c][i] = r2.comps[c][i] - base.comps[c][i];
        }
    CHECK(l2_norm(d2) == doctest::Approx(2.0 * l2_norm(d1)).epsilon(1e-10));
}

TEST_CASE("nu = 1 constraint identity: (u . Lap u) u = -|grad u|^2 u") {
    auto g = testutil::grid1(256);
    SphereField u = testutil::random_sphere_field(g, 0.05, 8, 14);
    FourierField uhat = forward_transform(u.values);
    NodalField lap = inverse_transform(fractional_laplacian(uhat, 1.0));  // (-Lap)
    NodalField grad0 = inverse_transform(derivative(uhat, 0));
    double defect = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double ulap = 0.0, g2 = 0.0;
        for (int c = 0; c < 3; ++c) {
            ulap -= u.values.comps[c][i] * lap.comps[c][i];  // u . Lap u
            g2 += grad0.comps[c][i] * grad0.comps[c][i];
        }
        defect = std::max(defect, std::abs(ulap + g2));
        scale = std::max(scale, std::abs(g2));
    }
    CHECK(defect < 1e-10 * std::max(scale, 1e-12));
}

TEST_CASE("nu = 2 constraint expansion on smooth data") {
    for (int n : {1, 2, 3}) {
        const int N = (n == 1) ? 256 : (n == 2) ? 64 : 32;
        auto g = testutil::grid_n(n, N);
        SphereField u = testutil::random_sphere_field(g, 0.05, std::max(1, N / 32), 300 + n);
        FourierField uhat = forward_transform(u.values);
        NodalField bilap = inverse_transform(fractional_laplacian(uhat, 2.0));  // Lap^2 u
        NodalField lap(g, 3);
        {
            NodalField mlap = inverse_transform(fractional_laplacian(uhat, 1.0));
            for (int c = 0; c < 3; ++c)
                for (std::size_t i = 0; i < g.size(); ++i) lap.comps[c][i] = -mlap.comps[c][i];
        }
        // |grad grad u|^2 and grad u . grad Lap u, all spectral derivatives.
        std::vector<NodalField> d1, dlap;
        FourierField laphat = forward_transform(lap);
        for (int j = 0; j < n; ++j) {
            d1.push_back(inverse_transform(derivative(uhat, j)));
            dlap.push_back(inverse_transform(derivative(laphat, j)));
        }
        std::vector<NodalField> d2;  // Hessian rows d_j d_k u
        for (int j = 0; j < n; ++j) {
            FourierField dj = derivative(uhat, j);
            for (int k = 0; k < n; ++k) d2.push_back(inverse_transform(derivative(dj, k)));
        }
        double defect = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            double lhs = 0.0;  // u . Lap^2 u
            for (int c = 0; c < 3; ++c) lhs += u.values.comps[c][i] * bilap.comps[c][i];
            double lap2 = 0.0, hess2 = 0.0, mix = 0.0;
            for (int c = 0; c < 3; ++c) {
                lap2 += lap.comps[c][i] * lap.comps[c][i];
                for (int j = 0; j < n; ++j) mix += d1[j].comps[c][i] * dlap[j].comps[c][i];
                for (std::size_t h = 0; h < d2.size(); ++h)
                    hess2 += d2[h].comps[c][i] * d2[h].comps[c][i];
            }
            const double rhs = lap2 + 2.0 * hess2 + 4.0 * mix;
            defect = std::max(defect, std::abs(lhs + rhs));
            scale = std::max(scale, std::abs(rhs));
        }
        CHECK(defect < 1e-8 * std::max(scale, 1e-12));
    }
}

TEST_CASE("gilbert form: rhs satisfies the residual identity") {
    auto g = testutil::grid1(256);
    SphereField u = testutil::random_sphere_field(g, 0.05, 8, 15);
    SimParams p;
    p.equation = Equation::LLGR;
    p.lambda = 0.7;
    p.epsilon = 1e-2;
    p.nu = 1;
    NodalField v = rhs_llgr(u, p.epsilon, p.nu, p.lambda);
    const double res = gilbert_residual(u, v, p);
    CHECK(res <= 1e-8 * l2_norm(v));

    // u = Q, v = 0: residual exactly zero.
    SphereField Q = constant_Q(g);
    NodalField zero(g, 3);
    CHECK(gilbert_residual(Q, zero, p) == 0.0);

    // Normal perturbations grow the residual linearly.
    NodalField v1 = v, v2 = v;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (int c = 0; c < 3; ++c) {
            v1.comps[c][i] += 1e-3 * u.values.comps[c][i];
            v2.comps[c][i] += 2e-3 * u.values.comps[c][i];
        }
    const double r1 = gilbert_residual(u, v1, p);
    const double r2 = gilbert_residual(u, v2, p);
    CHECK(r2 == doctest::Approx(2.0 * r1).epsilon(1e-4));

    SimParams bad = p;
    bad.lambda = 0.0;
    CHECK_THROWS_AS((void)gilbert_residual(u, v, bad), ParameterError);
}

TEST_CASE("constant maps are exact fixed points of both schemes") {
    auto g = testutil::grid1(64);
    for (Scheme s : {Scheme::ETDRK2, Scheme::RK4}) {
        SphereField u = constant_Q(g);
        SimParams p = hllg_params();
        p.scheme = s;
        p.dt = 0.05;
        auto rep = step(u, p);
        CHECK(rep.drift == 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            CHECK(u.values.comps[2][i] == 1.0);
            CHECK(u.values.comps[0][i] == 0.0);
        }
    }
}

TEST_CASE("ETDRK2 and RK4 agree to second order under dt halving") {
    auto g = testutil::grid1(128);
    SphereField u0 = testutil::random_sphere_field(g, 0.3, 4, 16);
    auto diff_at = [&](double dt) {
        SimParams p = hllg_params();
        p.dt = dt;
        p.T = 0.32;
        p.scheme = Scheme::ETDRK2;
        auto a = run(u0, p);
        p.scheme = Scheme::RK4;
        auto b = run(u0, p);
        return state_l2_diff(a.final_state, b.final_state);
    };
    const double d1 = diff_at(0.02);
    const double d2 = diff_at(0.01);
    CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.5));  // second order
}

TEST_CASE("one-step constraint drift is third order; fixed-horizon drift second order") {
    auto g = testutil::grid1(128);
    SphereField u0 = testutil::random_sphere_field(g, 0.3, 4, 17);
    // Single step from a unit state: a second-order scheme tracks the exact
    // (norm-preserving) flow to O(dt^3), so halving dt shrinks the one-step
    // drift by ~8.
    auto one_step_drift = [&](double dt) {
        SphereField u = u0;
        SimParams p = hllg_params();
        p.dt = dt;
        p.renormalize_each_step = false;
        return step(u, p).drift;
    };
    const double s1 = one_step_drift(0.02);
    const double s2 = one_step_drift(0.01);
    CHECK(s1 / s2 == doctest::Approx(8.0).epsilon(0.35));

    // Accumulated over a fixed horizon the local kicks sum to O(dt^2).
    auto horizon_drift = [&](double dt) {
        SimParams p = hllg_params();
        p.dt = dt;
        p.T = 0.32;
        p.renormalize_each_step = false;
        auto rec = run(u0, p);
        return rec.rows.back().constraint_drift;
    };
    const double h1 = horizon_drift(0.02);
    const double h2 = horizon_drift(0.01);
    CHECK(h1 / h2 == doctest::Approx(4.0).epsilon(0.4));
}

TEST_CASE("run from the base point gives identically zero diagnostics") {
    auto g = testutil::grid1(64);
    SimParams p = hllg_params();
    p.dt = 0.01;
    p.T = 0.1;
    p.sample_every = 2;
    auto rec = run(constant_Q(g), p);
    for (const auto& row : rec.rows) {
        CHECK(row.E == 0.0);
        CHECK(row.dissipation_integral == 0.0);
        CHECK(row.dist_L2 == 0.0);
        CHECK(row.constraint_drift == 0.0);
    }
    CHECK(rec.rows.front().t == 0.0);
    CHECK(rec.rows.back().t == doctest::Approx(0.1));
}

TEST_CASE("identical parameters and seed give bit-identical trajectories") {
    auto g = testutil::grid2(32);
    SphereField u0 = testutil::random_sphere_field(g, 0.1, 3, 18);
    SimParams p = hllg_params();
    p.dt = 0.02;
    p.T = 0.2;
    auto a = run(u0, p);
    auto b = run(u0, p);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].E == b.rows[i].E);
        CHECK(a.rows[i].dissipation_integral == b.rows[i].dissipation_integral);
        CHECK(a.rows[i].dist_Linf == b.rows[i].dist_Linf);
    }
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(a.final_state.values.comps[c][i] == b.final_state.values.comps[c][i]);
}

TEST_CASE("half-wave map conserves the energy to discretization accuracy") {
    auto g = testutil::grid1(256);
    SphereField u0 = testutil::random_sphere_field(g, 0.2, 6, 19);
    SimParams p;
    p.equation = Equation::HWM;
    p.lambda = 0.0;
    p.scheme = Scheme::RK4;
    p.dt = 1e-3;
    p.T = 0.5;
    auto rec = run(u0, p);
    const double e0 = rec.rows.front().E;
    const double eT = rec.rows.back().E;
    CHECK(std::abs(eT - e0) / e0 <= 1e-6);
}

TEST_CASE("evolution is equivariant under global rotations") {
    auto g = testutil::grid1(128);
    SphereField u0 = testutil::random_sphere_field(g, 0.2, 4, 20);
    const std::vector<double> R{0, 0, 1, 1, 0, 0, 0, 1, 0};  // even permutation, det +1
    SimParams p = hllg_params();
    p.dt = 0.01;
    p.T = 0.2;
    auto evolved_rotated = rotate(run(u0, p).final_state, R);
    auto rotated_evolved = run(rotate(u0, R), p).final_state;
    CHECK(state_l2_diff(evolved_rotated, rotated_evolved) < 1e-10);
}

TEST_CASE("SimParams validation enforces the equation contracts") {
    auto check_throws = [](SimParams p, int n = 1) {
        CHECK_THROWS_AS(p.validate(n), ParameterError);
    };
    SimParams p;
    p.equation = Equation::HLLG;
    p.lambda = 0.0;
    check_throws(p);  // hllg needs lambda > 0
    p = SimParams{};
    p.equation = Equation::HWM;
    p.lambda = 0.5;
    check_throws(p);  // hwm needs lambda = 0
    p = SimParams{};
    p.equation = Equation::LLGR;
    p.lambda = 1.0;
    p.epsilon = 0.0;
    check_throws(p);  // llgr needs eps > 0
    p.epsilon = 1e-2;
    p.nu = 2;
    check_throws(p, 1);  // nu rule for n = 1
    p.nu = 1;
    CHECK_THROWS_AS(p.validate(2), ParameterError);  // nu rule for n = 2
    p.allow_nu_override = true;
    CHECK_NOTHROW(p.validate(2));
    p = SimParams{};
    p.lambda = -1.0;
    check_throws(p);
    p = SimParams{};
    CHECK(p.beta().has_value());
    p.lambda = 0.0;
    p.equation = Equation::HWM;
    CHECK_FALSE(p.beta().has_value());  // flagged as undefined
    CHECK(SimParams{}.alpha() == doctest::Approx(0.5));  // lambda = 1 -> alpha = 1/2
}

TEST_CASE("divergence is reported with a time stamp") {
    auto g = testutil::grid1(64);
    SphereField u0 = testutil::random_sphere_field(g, 0.4, 8, 21);
    SimParams p;
    p.equation = Equation::LLGR;
    p.lambda = 1.0;
    p.epsilon = 10.0;  // eps |xi|^2 dt >> 1: explicit RK4 is unstable here
    p.nu = 1;
    p.scheme = Scheme::RK4;
    p.dt = 0.5;
    p.T = 50.0;
    p.renormalize_each_step = false;  // per-step renormalization would mask the blow-up
    bool caught = false;
    try {
        (void)run(u0, p);
    } catch (const DivergenceError& e) {
        caught = true;
        CHECK(e.time > 0.0);
    } catch (const ConstraintCollapseError& e) {
        caught = true;  // collapse is the other legitimate failure mode
        CHECK(e.time > 0.0);
    }
    CHECK(caught);
}
