#include "fracguide/aiming.hpp"
#include "fracguide/error.hpp"
#include "fracguide/scenario.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fracguide;

namespace {

Vector vec(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

AimingConfig example(std::uint64_t seed, double step = 0.0005) {
    Scenario s = paper_scenario(seed);
    s.step = step;
    return s.build();
}

}  // namespace

TEST_SUITE("aiming") {

TEST_CASE("built-in example configuration") {
    const AimingConfig c = scenario_paper_example();
    CHECK(c.alpha.value() == 0.5);
    CHECK(c.horizon == 5.0);
    CHECK(c.x0 == vec(-1, 0));
    CHECK(c.y0 == vec(0, 1));
    CHECK(c.partition.step() == doctest::Approx(0.0005).epsilon(1e-12));
    CHECK(c.partition.size() == 10001);
    CHECK(c.P.is_ball());
    CHECK(c.Q.as_ball().radius == 1.0);
    const Matrix& B = c.dyn.separable().B;
    const Matrix& C = c.dyn.separable().C;
    CHECK(B(0, 0) == 0.3);
    CHECK(B(1, 1) == 0.5);
    CHECK(C(0, 0) == 0.4);
    CHECK(C(1, 1) == 0.2);
    CHECK(B(0, 1) == 0.0);
    const Vector g = c.dyn(0.7, vec(0.2, -0.4), vec(1, 0), vec(0, 1));
    CHECK(g[0] == doctest::Approx(-0.4 + 0.3));
    CHECK(g[1] == doctest::Approx(-std::sin(0.2) + std::cos(0.7) + 0.2));
}

TEST_CASE("identical inputs and initial data give x == y at every node") {
    AimingConfig c = example(3, 0.01);
    Scenario s = paper_scenario(3);
    s.step = 0.01;
    s.B = s.C;  // u and v~ must enter identically for the guide to copy the system
    c = s.build();
    c.y0 = c.x0;
    const FixedPolicy shared{{vec(0.3, -0.2)}};
    c.disturbance = shared;
    c.guide_u = shared;
    const SimulationResult r = run_aiming(c);
    CHECK(r.x.values() == r.y.values());
    CHECK(r.deviation_sup == 0.0);
}

TEST_CASE("zero dynamics keep both motions at their initial states") {
    AimingConfig c = example(1, 0.05);
    c.dyn = GameDynamics::separable_affine([](double, const Vector&) { return Vector(Vector::Zero(2)); },
                                           Matrix::Zero(2, 2), Matrix::Zero(2, 2), 1.0, 1.0);
    const SimulationResult r = run_aiming(c);
    for (std::size_t m = 0; m < r.x.size(); ++m) {
        CHECK(r.x.at(m) == c.x0);
        CHECK(r.y.at(m) == c.y0);
    }
    CHECK(r.deviation_sup == (c.x0 - c.y0).norm());
}

TEST_CASE("invariants of an example run") {
    const AimingConfig c = example(42, 0.005);
    const SimulationResult r = run_aiming(c);
    CHECK((r.x.at(0) - r.y.at(0)).norm() == (c.x0 - c.y0).norm());
    CHECK(r.deviation_sup >= (c.x0 - c.y0).norm());
    CHECK(std::isfinite(r.deviation_sup));
    CHECK(r.u.within(c.P));
    CHECK(r.v.within(c.Q));
    CHECK(r.u_tilde.within(c.P));
    CHECK(r.v_tilde.within(c.Q));
    CHECK(r.u.values.size() == c.partition.cells());
    CHECK(r.K == doctest::Approx(oracle::kPaperK).epsilon(1e-12));
    CHECK(r.bound_rhs == doctest::Approx(0.1 + oracle::kPaperK * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.seed == std::optional<std::uint64_t>(42));
    const InequalityReport rep = verify_deviation_inequality(r, c.alpha, l1_tolerance(c.alpha, c.partition.step()));
    CHECK_FALSE(rep.violated());
}

TEST_CASE("reproducibility: same config gives bit-identical results") {
    const AimingConfig c = example(7, 0.01);
    const SimulationResult a = run_aiming(c);
    const SimulationResult b = run_aiming(c);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    for (std::size_t j = 0; j < a.v.values.size(); ++j) {
        CHECK(a.v.values[j] == b.v.values[j]);
        CHECK(a.u_tilde.values[j] == b.u_tilde.values[j]);
    }
    const SimulationResult other = run_aiming(example(8, 0.01));
    CHECK_FALSE(other.x == a.x);
}

TEST_CASE("aiming beats no-aiming on 10 seeds") {
    int wins_offset = 0;
    int wins_equal = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        AimingConfig aim = example(seed);
        AimingConfig blind = aim;
        blind.system_u = SeededRandomPolicy{seed};
        blind.guide_v = SeededRandomPolicy{seed};
        if (run_aiming(aim).deviation_sup <= run_aiming(blind).deviation_sup) ++wins_offset;

        AimingConfig aim0 = example(seed, 0.002);
        aim0.y0 = aim0.x0;
        AimingConfig blind0 = aim0;
        blind0.system_u = SeededRandomPolicy{seed};
        blind0.guide_v = SeededRandomPolicy{seed};
        if (run_aiming(aim0).deviation_sup < run_aiming(blind0).deviation_sup) ++wins_equal;
    }
    CHECK(wins_offset >= 9);
    CHECK(wins_equal >= 9);
}

TEST_CASE("refining the partition does not worsen proximity (seed 42)") {
    const double fine = run_aiming(example(42, 0.0005)).deviation_sup;
    const double coarse = run_aiming(example(42, 0.01)).deviation_sup;
    CHECK(std::isfinite(fine));
    CHECK(fine <= coarse);
}

TEST_CASE("deviation_vs_diameter") {
    const AimingConfig c = example(5, 0.01);
    const std::vector<double> one{0.01};
    const auto single = deviation_vs_diameter(c, one);
    REQUIRE(single.size() == 1);
    CHECK(single[0].delta == 0.01);
    CHECK(single[0].deviation_sup == run_aiming(c).deviation_sup);

    const std::vector<double> ds{0.05, 0.02, 0.01};
    const auto pts = deviation_vs_diameter(c, ds);
    REQUIRE(pts.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(pts[i].delta == ds[i]);

    const std::vector<double> ascending{0.01, 0.02};
    CHECK_THROWS_AS((void)deviation_vs_diameter(c, ascending), DomainError);
    const std::vector<double> negative{-0.1};
    CHECK_THROWS_AS((void)deviation_vs_diameter(c, negative), DomainError);
}

TEST_CASE("adversarial policies over balls") {
    AimingConfig c = example(2, 0.01);
    c.disturbance = AdversarialPolicy{};
    c.guide_u = AdversarialPolicy{};
    const SimulationResult r = run_aiming(c);
    CHECK(r.v.within(c.Q));
    CHECK(r.u_tilde.within(c.P));
    CHECK(std::isfinite(r.deviation_sup));
}

TEST_CASE("config validation") {
    AimingConfig c = example(1, 0.01);
    c.x0 = Vector::Zero(3);
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = example(1, 0.01);
    c.disturbance = ExtremalPolicy{};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = example(1, 0.01);
    c.system_u = AdversarialPolicy{};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = example(1, 0.01);
    c.disturbance = FixedPolicy{{vec(2.0, 0.0)}};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = example(1, 0.01);
    c.partition = TimeGrid::uniform(4.0, 10);
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("blackbox dynamics over balls propagate the selector refusal") {
    AimingConfig c = example(1, 0.05);
    c.dyn = GameDynamics::blackbox(
        [](double, const Vector& x, const Vector& u, const Vector& v) { return Vector(-x + u + v); }, 2, 2, 2, 1.0,
        3.0);
    CHECK_THROWS_AS((void)run_aiming(c), UnsupportedError);
}

TEST_CASE("non-finite dynamics abort with a node index") {
    AimingConfig c = example(1, 0.05);
    c.dyn = GameDynamics::separable_affine(
        [](double t, const Vector& x) { return Vector(t > 1.0 ? Vector(x.array() / 0.0) : Vector(x)); },
        Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0, 1.0);
    CHECK_THROWS_AS((void)run_aiming(c), NumericError);
}

TEST_CASE("substeps refine the integration grid inside each cell") {
    AimingConfig c = example(4, 0.05);
    c.substeps = 4;
    const SimulationResult r = run_aiming(c);
    CHECK(r.u.values.size() == c.partition.cells());
    CHECK(std::isfinite(r.deviation_sup));
}

TEST_CASE("theorem constants for the example") {
    const AimingConfig c = scenario_paper_example();
    const TheoremConstants k = theorem_constants(c.dyn, c.alpha, 5.0, 1.0, 0.1);
    CHECK(k.K == doctest::Approx(oracle::kPaperK).epsilon(1e-12));
    CHECK(k.eta == doctest::Approx(oracle::kPaperEta).epsilon(1e-12));
    CHECK(k.R_bar == doctest::Approx(oracle::kPaperRBar).epsilon(1e-12));
    REQUIRE(k.delta1.has_value());
    CHECK(k.delta == std::min(*k.delta1, k.delta2));
    CHECK(k.delta2 > 0.0);

    const TheoremConstants small = theorem_constants(c.dyn, c.alpha, 5.0, 1.0, 0.01);
    CHECK(small.eta < k.eta);
    CHECK(small.delta2 < k.delta2);

    const GameDynamics no_t = GameDynamics::separable_affine(c.dyn.separable().drift, c.dyn.separable().B,
                                                             c.dyn.separable().C, 1.0, 1.9);
    CHECK_FALSE(theorem_constants(no_t, c.alpha, 5.0, 1.0, 0.1).delta1.has_value());
    const TheoremConstants measured = theorem_constants(c.dyn, c.alpha, 5.0, 1.0, 0.1, 3.0);
    CHECK(measured.H_bar == 3.0);
    CHECK(measured.delta2 > k.delta2);
    CHECK_THROWS_AS(GameDynamics::separable_affine(c.dyn.separable().drift, Matrix::Identity(2, 2),
                                                   Matrix::Identity(2, 2), 0.0, 1.0),
                    DomainError);
    // Outside the Mittag-Leffler envelope.
    CHECK_THROWS_AS((void)theorem_constants(c.dyn, c.alpha, 2000.0, 1.0, 0.1), RangeError);
}

}  // TEST_SUITE
