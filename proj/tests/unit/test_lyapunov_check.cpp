#include "fracguide/error.hpp"
#include "fracguide/fde_solver.hpp"
#include "fracguide/lyapunov_check.hpp"
#include "fracguide/rng.hpp"
#include "fracguide/scenario.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace fracguide;

namespace {

Trajectory planar(const TimeGrid& g, double (*f)(double)) {
    return GridFunction::sample(g, 2, [f](double t) {
        Vector v(2);
        v << f(t), 0.0;
        return v;
    });
}

// Seeded solver trajectory of the example drift with frozen random controls.
Trajectory example_trajectory(std::uint64_t seed, std::size_t N) {
    Rng rng(seed);
    const Vector u = rng.in_ball(2, 1.0);
    const Vector v = rng.in_ball(2, 1.0);
    Vector x0(2);
    x0 << 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0;
    const RhsFunction rhs(
        [u, v](double t, const Vector& x) {
            Vector g(2);
            g << x[1] + 0.3 * u[0] + 0.4 * v[0], -std::sin(x[0]) + std::cos(t) + 0.5 * u[1] + 0.2 * v[1];
            return g;
        },
        2, 1.9);
    const CauchyProblem p(rhs, FracOrder(0.5), x0, 5.0);
    return solve_euler(p, TimeGrid::uniform(5.0, N));
}

}  // namespace

TEST_SUITE("lyapunov_check") {

TEST_CASE("quadratic inequality: x = (t, 0) closed form") {
    const FracOrder a(0.5);
    const TimeGrid g = TimeGrid::uniform(1.0, 2048);
    const Trajectory x = planar(g, [](double t) { return t; });
    const InequalityReport r = check_quadratic_inequality(x, a, l1_tolerance(a, g.step()));
    CHECK(r.lhs.back() == doctest::Approx(oracle::kTwoOverGamma25).epsilon(1e-3));
    CHECK(r.rhs.back() == doctest::Approx(oracle::kTwoOverGamma15).epsilon(1e-12));
    CHECK(r.rhs.back() - r.lhs.back() == doctest::Approx(0.752).epsilon(1e-2));
    CHECK_FALSE(r.violated());
    CHECK(r.max_violation <= 0.0);
}

TEST_CASE("quadratic inequality: x = (t^0.7, 0) closed form") {
    const FracOrder a(0.5);
    const TimeGrid g = TimeGrid::uniform(1.0, 4096);
    const Trajectory x = planar(g, [](double t) { return std::pow(t, 0.7); });
    const InequalityReport r = check_quadratic_inequality(x, a, l1_tolerance(a, g.step()));
    CHECK(r.lhs.back() == doctest::Approx(oracle::kGamma24OverGamma19).epsilon(5e-3));
    CHECK(r.rhs.back() == doctest::Approx(oracle::kTwoGamma17OverGamma12).epsilon(5e-3));
    CHECK_FALSE(r.violated());
}

TEST_CASE("sign-flip probe sin(5t) on [0, 2]") {
    const FracOrder a(0.5);
    const TimeGrid g = TimeGrid::uniform(2.0, 8192);
    const Trajectory x = planar(g, [](double t) { return std::sin(5.0 * t); });
    const InequalityReport r = check_quadratic_inequality(x, a, l1_tolerance(a, g.step()));
    CHECK_FALSE(r.violated());
    CHECK(r.max_violation <= 1e-12);
}

TEST_CASE("convex battery on solver trajectories of the example system") {
    const FracOrder a(0.5);
    const std::vector<LyapunovFn> battery{LyapunovFn::quadratic(), LyapunovFn::log_sum_exp(),
                                          LyapunovFn::quartic_regularized(0.1, 10.0)};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Trajectory x = shift_to_origin(example_trajectory(seed, 1024));
        for (const auto& V : battery) {
            const InequalityReport r = check_convex_inequality(V, x, a, l1_tolerance(a, x.grid().step()));
            CAPTURE(V.name);
            CAPTURE(seed);
            CHECK_FALSE(r.violated());
            CHECK(r.max_gradient_norm > 0.0);
            CHECK(std::isfinite(r.smooth_case_bound));
        }
    }
}

TEST_CASE("deviation inequality accepts arbitrary starting points") {
    const FracOrder a(0.5);
    const Trajectory s = example_trajectory(11, 1024);
    CHECK(s.at(0).norm() > 0.0);
    CHECK_FALSE(check_deviation_inequality(s, a, l1_tolerance(a, s.grid().step())).violated());
    CHECK_THROWS_AS(check_quadratic_inequality(s, a, 1e-3), DomainError);
}

TEST_CASE("a concave V breaks the inequality beyond tolerance") {
    const FracOrder a(0.5);
    const LyapunovFn concave("neg_quadratic", [](const Vector& x) { return -x.squaredNorm(); },
                             [](const Vector& x) { return Vector(-2.0 * x); }, 2.0);
    const TimeGrid g = TimeGrid::uniform(1.0, 1024);
    const Trajectory x = planar(g, [](double t) { return t; });
    CHECK(check_convex_inequality(concave, x, a, l1_tolerance(a, g.step())).violated());
    CHECK_FALSE(validate_lyapunov(concave, 2, 1.0, 200, 3).ok());
}

TEST_CASE("validate_lyapunov accepts the built-in convex functions") {
    for (const auto& V : {LyapunovFn::quadratic(), LyapunovFn::log_sum_exp(),
                          LyapunovFn::quartic_regularized(0.5, 2.0)}) {
        const LyapunovValidation val = validate_lyapunov(V, 3, 2.0, 1000, 42);
        CAPTURE(V.name);
        CHECK(val.ok());
    }
}

TEST_CASE("shift_to_origin and grid preconditions") {
    const TimeGrid g = TimeGrid::uniform(1.0, 10);
    const Trajectory x = GridFunction::sample(g, 1, [](double t) { return Vector::Constant(1, 1.0 + t); });
    CHECK(shift_to_origin(x).scalar_at(0) == 0.0);
    CHECK(shift_to_origin(x).scalar_at(10) == doctest::Approx(1.0));
    const Trajectory nu = GridFunction::sample(TimeGrid::from_nodes({0.0, 0.3, 1.0}), 1,
                                               [](double t) { return Vector::Constant(1, t); });
    CHECK_THROWS_AS(check_quadratic_inequality(nu, FracOrder(0.5), 1e-3), DomainError);
}

TEST_CASE("l1_tolerance scaling") {
    CHECK(l1_tolerance(FracOrder(0.5), 0.01) == doctest::Approx(kL1ToleranceConstant * 0.1));
    CHECK(l1_tolerance(FracOrder(0.5), 0.0025) < l1_tolerance(FracOrder(0.5), 0.01));
}

}  // TEST_SUITE
