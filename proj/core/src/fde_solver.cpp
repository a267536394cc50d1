#include "fracguide/fde_solver.hpp"

#include "fracguide/error.hpp"
#include "fracguide/rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fracguide {

RhsFunction::RhsFunction(Eval eval_fn, Eigen::Index dimension, double growth,
                         std::optional<double> lipschitz)
    : eval(std::move(eval_fn)), dim(dimension), c_f(growth), lambda_f(lipschitz) {
    if (!eval) throw DomainError("rhs evaluator is empty");
    if (dim < 1) throw DomainError("rhs dimension must be positive");
    if (!(c_f > 0.0)) throw DomainError("growth constant c_f must be positive");
    if (lambda_f && !(*lambda_f > 0.0)) throw DomainError("Lipschitz constant must be positive");
}

Vector RhsFunction::operator()(double t, const Vector& x) const {
    Vector out = eval(t, x);
    if (out.size() != dim) {
        throw DomainError("rhs returned a vector of length " + std::to_string(out.size()) +
                          ", expected " + std::to_string(dim));
    }
    return out;
}

double sample_growth_ratio(const RhsFunction& rhs, double horizon, double radius, int samples,
                           std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = horizon * rng.uniform();
        const Vector x = rng.in_ball(rhs.dim, radius);
        worst = std::max(worst, rhs(t, x).norm() / (1.0 + x.norm()));
    }
    return worst;
}

CauchyProblem::CauchyProblem(RhsFunction f, FracOrder order, Vector initial, double T)
    : rhs(std::move(f)), alpha(order), x0(std::move(initial)), horizon(T) {
    if (x0.size() != rhs.dim) {
        throw DomainError("initial value has length " + std::to_string(x0.size()) +
                          ", rhs dimension is " + std::to_string(rhs.dim));
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("Cauchy problem horizon must be positive and finite");
    }
}

AprioriBounds apriori_bounds(double R0, double c_f, FracOrder alpha, double horizon) {
    if (!(R0 > 0.0) || !(c_f > 0.0) || !(horizon > 0.0)) {
        throw DomainError("apriori_bounds requires R0, c_f, T > 0");
    }
    const double a = alpha.value();
    const double t_alpha = std::pow(horizon, a);
    const double R = (1.0 + R0) * mittag_leffler(a, c_f * t_alpha) - 1.0;
    const double h_cal = t_alpha / gamma_fn(a + 1.0);
    return AprioriBounds{R, (1.0 + R) * c_f * h_cal, R0};
}

namespace {

void require_same_horizon(double expected, const TimeGrid& grid) {
    if (std::abs(grid.horizon() - expected) > 1e-12 * std::max(1.0, expected)) {
        throw DomainError("grid horizon " + std::to_string(grid.horizon()) +
                          " differs from problem horizon " + std::to_string(expected));
    }
}

void require_finite(const Vector& v, std::size_t node, const char* what) {
    if (!v.allFinite()) {
        throw NumericError(std::string("non-finite ") + what, node);
    }
}

}  // namespace

Trajectory solve_euler(const CauchyProblem& problem, const TimeGrid& grid) {
    require_same_horizon(problem.horizon, grid);
    const ProductRectangleWeights weights(problem.alpha, grid);
    const Eigen::Index dim = problem.rhs.dim;
    const auto n = static_cast<Eigen::Index>(grid.size());

    Matrix x(dim, n);
    Matrix f(dim, n);
    x.col(0) = problem.x0;
    for (Eigen::Index m = 1; m < n; ++m) {
        const auto prev = static_cast<std::size_t>(m - 1);
        f.col(m - 1) = problem.rhs(grid[prev], x.col(m - 1));
        require_finite(f.col(m - 1), prev, "rhs evaluation");
        x.col(m) = problem.x0 + weights.accumulate(static_cast<std::size_t>(m), f);
        require_finite(x.col(m), static_cast<std::size_t>(m), "state");
    }
    return Trajectory(grid, std::move(x));
}

double check_solution_residual(const CauchyProblem& problem, const Trajectory& x) {
    const TimeGrid& grid = x.grid();
    require_same_horizon(problem.horizon, grid);
    if (x.dim() != problem.rhs.dim) {
        throw DomainError("trajectory dimension does not match the problem");
    }
    const ProductRectangleWeights weights(problem.alpha, grid);
    const auto n = static_cast<Eigen::Index>(grid.size());

    Matrix f(x.dim(), n);
    for (Eigen::Index m = 0; m < n; ++m) {
        f.col(m) = problem.rhs(grid[static_cast<std::size_t>(m)], x.values().col(m));
    }
    double worst = (x.values().col(0) - problem.x0).norm();
    for (Eigen::Index m = 1; m < n; ++m) {
        // Same association as solve_euler so that its output is an exact fixed point.
        const Vector image = problem.x0 + weights.accumulate(static_cast<std::size_t>(m), f);
        worst = std::max(worst, (x.values().col(m) - image).norm());
    }
    return worst;
}

}  // namespace fracguide
