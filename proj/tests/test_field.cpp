#include <doctest.h>

#include <cmath>

#include "hllg/field.hpp"
#include "hllg/norms.hpp"
#include "testutil.hpp"

using namespace hllg;
using testutil::kPi;

TEST_CASE("cross: constant e1 x e2 = e3 and u x u = 0") {
    auto g = testutil::grid1(16);
    NodalField e1(g, 3), e2(g, 3);
    for (std::size_t i = 0; i < g.size(); ++i) {
        e1.comps[0][i] = 1.0;
        e2.comps[1][i] = 1.0;
    }
    NodalField c = cross(e1, e2);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(c.comps[0][i] == 0.0);
        CHECK(c.comps[1][i] == 0.0);
        CHECK(c.comps[2][i] == 1.0);
    }
    NodalField u = testutil::random_band_limited(g, 3, 4, 3);
    CHECK(testutil::max_abs(cross(u, u)) == 0.0);
}

TEST_CASE("cross output is orthogonal to both inputs pointwise") {
    auto g = testutil::grid2(16);
    NodalField a = testutil::random_band_limited(g, 3, 5, 10);
    NodalField b = testutil::random_band_limited(g, 3, 5, 11);
    // Normalize to O(1) values so the absolute tolerance is meaningful.
    const double sa = 1.0 / testutil::max_abs(a), sb = 1.0 / testutil::max_abs(b);
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < g.size(); ++i) {
            a.comps[k][i] *= sa;
            b.comps[k][i] *= sb;
        }
    NodalField c = cross(a, b);
    NodalField da = dot(c, a), db = dot(c, b);
    CHECK(testutil::max_abs(da) < 1e-14);
    CHECK(testutil::max_abs(db) < 1e-14);
}

TEST_CASE("cross is bilinear and antisymmetric") {
    auto g = testutil::grid1(32);
    NodalField a = testutil::random_band_limited(g, 3, 5, 20);
    NodalField b = testutil::random_band_limited(g, 3, 5, 21);
    NodalField c = testutil::random_band_limited(g, 3, 5, 22);
    NodalField ab = cross(a, b), ba = cross(b, a);
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(ab.comps[k][i] == doctest::Approx(-ba.comps[k][i]).epsilon(1e-14));
    NodalField combo(g, 3);
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < g.size(); ++i)
            combo.comps[k][i] = 2.0 * b.comps[k][i] - 0.5 * c.comps[k][i];
    NodalField lhs = cross(a, combo);
    NodalField ac = cross(a, c);
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(lhs.comps[k][i] ==
                  doctest::Approx(2.0 * ab.comps[k][i] - 0.5 * ac.comps[k][i]).epsilon(1e-13));
}

TEST_CASE("Lagrange identity u x (u x xi) = (u.xi)u - |u|^2 xi") {
    auto g = testutil::grid1(32);
    NodalField u = testutil::random_band_limited(g, 3, 5, 30);
    NodalField xi = testutil::random_band_limited(g, 3, 5, 31);
    NodalField lhs = cross(u, cross(u, xi));
    for (std::size_t i = 0; i < g.size(); ++i) {
        double uxi = 0.0, uu = 0.0;
        for (int k = 0; k < 3; ++k) {
            uxi += u.comps[k][i] * xi.comps[k][i];
            uu += u.comps[k][i] * u.comps[k][i];
        }
        for (int k = 0; k < 3; ++k) {
            const double rhs = uxi * u.comps[k][i] - uu * xi.comps[k][i];
            CHECK(lhs.comps[k][i] == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("project_normal: Pi_u u = u and Pi_u kills tangent fields") {
    auto g = testutil::grid1(32);
    SphereField u = testutil::random_sphere_field(g, 0.2, 4, 40);
    NodalField proj = project_normal(u, u.values);
    CHECK(testutil::max_abs_diff(proj, u.values) < 1e-12);
    // xi = u x w is tangent for any w.
    NodalField w = testutil::random_band_limited(g, 3, 5, 41);
    NodalField xi = cross(u.values, w);
    CHECK(testutil::max_abs(project_normal(u, xi)) < 1e-13 * std::max(1.0, testutil::max_abs(xi)));
}

TEST_CASE("(1 - Pi_u) xi + u x (u x xi) = 0 for m = 2") {
    auto g = testutil::grid2(16);
    SphereField u = testutil::random_sphere_field(g, 0.3, 4, 50);
    NodalField xi = testutil::random_band_limited(g, 3, 5, 51);
    NodalField tang = project_tangent(u, xi);
    NodalField dbl = cross(u.values, cross(u.values, xi));
    for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(tang.comps[k][i] + dbl.comps[k][i] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Pi_u is idempotent and symmetric") {
    auto g = testutil::grid1(32);
    SphereField u = testutil::random_sphere_field(g, 0.2, 4, 60);
    NodalField xi = testutil::random_band_limited(g, 3, 5, 61);
    NodalField eta = testutil::random_band_limited(g, 3, 5, 62);
    NodalField once = project_normal(u, xi);
    NodalField twice = project_normal(u, once);
    CHECK(testutil::max_abs_diff(once, twice) < 1e-12);
    CHECK(inner_product(project_normal(u, xi), eta) ==
          doctest::Approx(inner_product(xi, project_normal(u, eta))).epsilon(1e-12));
}

TEST_CASE("renormalize: already-unit input unchanged, 2*e1 handled, drift formula") {
    auto g = testutil::grid1(16);
    NodalField unit(g, 3);
    for (std::size_t i = 0; i < g.size(); ++i) unit.comps[0][i] = 1.0;
    NodalField copy = unit;
    CHECK(renormalize(copy).drift == 0.0);
    CHECK(testutil::max_abs_diff(copy, unit) == 0.0);

    NodalField twice(g, 3);
    for (std::size_t i = 0; i < g.size(); ++i) twice.comps[0][i] = 2.0;
    auto rep = renormalize(twice);
    CHECK(rep.drift == doctest::Approx(1.0));
    CHECK(testutil::max_abs_diff(twice, unit) < 1e-15);

    // unit field plus tangent eps: drift = sqrt(1 + eps^2) - 1
    const double eps = 0.3;
    NodalField pert = unit;
    for (std::size_t i = 0; i < g.size(); ++i) pert.comps[1][i] = eps;
    CHECK(renormalize(pert).drift ==
          doctest::Approx(std::sqrt(1.0 + eps * eps) - 1.0).epsilon(1e-14));
}

TEST_CASE("renormalize aborts on constraint collapse with location") {
    auto g = testutil::grid1(16);
    NodalField v(g, 3);
    for (std::size_t i = 0; i < g.size(); ++i) v.comps[0][i] = 1.0;
    v.comps[0][5] = 0.25;  // |u| < 0.5 at node 5
    try {
        renormalize(v, 1.5);
        FAIL("expected ConstraintCollapseError");
    } catch (const ConstraintCollapseError& e) {
        CHECK(e.node_index == 5);
        CHECK(e.time == doctest::Approx(1.5));
    }
}

TEST_CASE("great circle: zero profile gives the constant (1,0,0)") {
    auto g = testutil::grid1(32);
    std::vector<double> theta(g.size(), 0.0);
    SphereField u = make_great_circle(g, theta);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(u.values.comps[0][i] == 1.0);
        CHECK(u.values.comps[1][i] == 0.0);
        CHECK(u.values.comps[2][i] == 0.0);
    }
}

TEST_CASE("great circle: linear profile winds once") {
    auto g = testutil::grid1(64, 5.0);
    std::vector<double> theta(g.size());
    for (int i = 0; i < g.dims[0]; ++i) theta[i] = 2.0 * kPi * g.node_coord(0, i) / g.box[0];
    SphereField u = make_great_circle(g, theta);
    CHECK(winding_number(u) == 1);
    CHECK(unit_drift(u.values) <= 1e-10);
}

TEST_CASE("great circle energy matches the small-amplitude linearization") {
    const double L = 2.0 * kPi;
    auto g = testutil::grid1(256, L);
    const double a = 0.1;
    std::vector<double> theta(g.size());
    for (int i = 0; i < g.dims[0]; ++i)
        theta[i] = a * std::sin(2.0 * kPi * g.node_coord(0, i) / L);
    SphereField u = make_great_circle(g, theta);
    // ||theta||^2_{H^(1/2)} = a^2 pi for L = 2 pi, so E ~ a^2 pi / 2.
    CHECK(energy(u) == doctest::Approx(a * a * kPi / 2.0).epsilon(0.02));
}

TEST_CASE("perturbation generator: a = 0 gives Q, same seed gives identical fields") {
    auto g = testutil::grid2(16);
    const std::vector<double> Q{0.0, 0.0, 1.0};
    auto r0 = make_perturbation(g, Q, 0.0, 3, 7);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(r0.u.values.comps[0][i] == 0.0);
        CHECK(r0.u.values.comps[2][i] == 1.0);
    }
    CHECK(r0.sobolev_n_half == 0.0);

    auto ra = make_perturbation(g, Q, 0.05, 3, 99);
    auto rb = make_perturbation(g, Q, 0.05, 3, 99);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(ra.u.values.comps[c][i] == rb.u.values.comps[c][i]);  // bit-identical
    auto rc = make_perturbation(g, Q, 0.05, 3, 100);
    CHECK(testutil::max_abs_diff(ra.u.values, rc.u.values) > 1e-3);
}

TEST_CASE("perturbation seminorm scales linearly in the amplitude") {
    for (int n : {1, 2}) {
        auto g = testutil::grid_n(n, n == 1 ? 128 : 32);
        const std::vector<double> Q{0.0, 0.0, 1.0};
        const double a0 = 0.01;
        const double s1 = make_perturbation(g, Q, a0, 4, 5).sobolev_n_half;
        const double s2 = make_perturbation(g, Q, 2.0 * a0, 4, 5).sobolev_n_half;
        const double s4 = make_perturbation(g, Q, 4.0 * a0, 4, 5).sobolev_n_half;
        CHECK(s2 / s1 == doctest::Approx(2.0).epsilon(0.05));
        CHECK(s4 / s1 == doctest::Approx(4.0).epsilon(0.05));
    }
}

TEST_CASE("generator outputs satisfy the unit constraint to 1e-10") {
    auto g = testutil::grid1(64);
    auto r = make_perturbation(g, {1.0, 0.0, 0.0}, 0.2, 8, 12);
    CHECK(unit_drift(r.u.values) <= 1e-10);
    std::vector<double> theta(g.size());
    for (int i = 0; i < g.dims[0]; ++i) theta[i] = 0.3 * std::sin(2.0 * kPi * i / g.dims[0]);
    CHECK(unit_drift(make_great_circle(g, theta).values) <= 1e-10);
}

TEST_CASE("cross requires 3-component fields") {
    auto g = testutil::grid1(16);
    NodalField a(g, 2), b(g, 2);
    CHECK_THROWS_AS((void)cross(a, b), UnsupportedTargetError);
}
