#include "fracguide/cli.hpp"

#include "fracguide/aiming.hpp"
#include "fracguide/fde_solver.hpp"
#include "fracguide/frac_core.hpp"
#include "fracguide/lyapunov_check.hpp"
#include "number_format.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace fracguide {

namespace {

struct Check {
    std::string name;
    std::function<double()> error;  // returns an error measure
    double tolerance;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// I^alpha t^beta at t = 1: Gamma(beta + 1) / Gamma(beta + alpha + 1).
double power_rule_error(double alpha_v, double beta, std::size_t steps) {
    const FracOrder alpha(alpha_v);
    const TimeGrid grid = TimeGrid::uniform(1.0, steps);
    const GridFunction phi = GridFunction::sample(grid, 1, [&](double t) {
        return Vector::Constant(1, std::pow(t, beta));
    });
    const GridFunction I = rl_integral(alpha, phi);
    const double exact = std::tgamma(beta + 1.0) / std::tgamma(beta + alpha_v + 1.0);
    return std::abs(I.scalar_at(grid.size() - 1) - exact);
}

std::vector<Check> battery() {
    std::vector<Check> checks;
    checks.push_back({"gamma(0.5) = sqrt(pi)", [] { return rel(gamma_fn(0.5), std::sqrt(M_PI)); }, 1e-13});
    checks.push_back({"gamma(5) = 24", [] { return rel(gamma_fn(5.0), 24.0); }, 1e-13});
    checks.push_back({"E_1(1) = e", [] { return rel(mittag_leffler(1.0, 1.0), std::exp(1.0)); }, 1e-13});
    checks.push_back({"E_1(-3) = exp(-3)", [] { return rel(mittag_leffler(1.0, -3.0), std::exp(-3.0)); }, 1e-10});
    checks.push_back({"E_1/2(-2) = exp(4) erfc(2)",
                      [] { return rel(mittag_leffler(0.5, -2.0), std::exp(4.0) * std::erfc(2.0)); },
                      1e-10});
    checks.push_back({"E_1/2(1) = e erfc(-1)",
                      [] { return rel(mittag_leffler(0.5, 1.0), std::exp(1.0) * std::erfc(-1.0)); },
                      1e-13});
    checks.push_back({"I^1/2 of 1 at t = 1 (exact on any grid)", [] { return power_rule_error(0.5, 0.0, 64); },
                      1e-12});
    checks.push_back({"I^1/2 of t at t = 1 (first order)", [] { return power_rule_error(0.5, 1.0, 1024); },
                      1e-3});
    checks.push_back({"L1 Caputo derivative of t at t = 1 (exact)", [] {
                          const FracOrder alpha(0.5);
                          const TimeGrid grid = TimeGrid::uniform(1.0, 64);
                          const GridFunction x = GridFunction::sample(grid, 1, [](double t) {
                              return Vector::Constant(1, t);
                          });
                          const GridFunction d = caputo_derivative_l1(alpha, x);
                          return rel(d.scalar_at(grid.size() - 1), 1.0 / std::tgamma(1.5));
                      },
                      1e-12});
    checks.push_back({"Euler solve of D^1/2 x = -x against E_1/2(-t^1/2)", [] {
                          const FracOrder alpha(0.5);
                          const RhsFunction rhs([](double, const Vector& x) { return Vector(-x); }, 1, 1.0, 1.0);
                          const CauchyProblem problem(rhs, alpha, Vector::Ones(1), 1.0);
                          const Trajectory x = solve_euler(problem, TimeGrid::uniform(1.0, 2048));
                          return std::abs(x.scalar_at(x.size() - 1) - mittag_leffler(0.5, -1.0));
                      },
                      5e-3});
    checks.push_back({"quadratic inequality on sin(t)", [] {
                          const FracOrder alpha(0.5);
                          const TimeGrid grid = TimeGrid::uniform(2.0, 400);
                          const Trajectory x = GridFunction::sample(grid, 2, [](double t) {
                              Vector v(2);
                              v << std::sin(3.0 * t), t * t - t;
                              return v;
                          });
                          const InequalityReport r =
                              check_quadratic_inequality(x, alpha, l1_tolerance(alpha, grid.step()));
                          return r.violated() ? 1.0 : 0.0;
                      },
                      0.5});
    return checks;
}

}  // namespace

bool run_selftest(std::ostream& out) {
    bool all = true;
    for (const auto& c : battery()) {
        double err = 0.0;
        bool ok = false;
        try {
            err = c.error();
            ok = std::isfinite(err) && err <= c.tolerance;
        } catch (const std::exception& e) {
            out << "FAIL " << c.name << " (" << e.what() << ")\n";
            all = false;
            continue;
        }
        out << (ok ? "PASS " : "FAIL ") << c.name << "  err=" << detail::format_significant(err, 3)
            << " tol=" << detail::format_significant(c.tolerance, 3) << "\n";
        all = all && ok;
    }
    out << (all ? "selftest passed\n" : "selftest FAILED\n");
    return all;
}

}  // namespace fracguide
