#pragma once

// Fractional forward Euler for the Caputo Cauchy problem
//   (^C D^alpha x)(t) = f(t, x(t)),  x(0) = x0,
// and the a-priori bounds on its solutions.

#include "fracguide/frac_core.hpp"

#include <cstdint>
#include <functional>
#include <optional>

namespace fracguide {

/// Right-hand side f(t, x) with its declared growth constant c_f, i.e.
/// |f(t, x)| <= (1 + |x|) c_f, and optional Lipschitz constant.
struct RhsFunction {
    using Eval = std::function<Vector(double, const Vector&)>;

    RhsFunction(Eval eval, Eigen::Index dim, double c_f, std::optional<double> lambda_f = {});

    [[nodiscard]] Vector operator()(double t, const Vector& x) const;

    Eval eval;
    Eigen::Index dim;
    double c_f;
    std::optional<double> lambda_f;
};

/// Samples `samples` random (t, x) pairs in [0, T] x B(radius) and reports
/// the largest ratio |f(t, x)| / (1 + |x|). A declared c_f below this value
/// is wrong.
[[nodiscard]] double sample_growth_ratio(const RhsFunction& rhs, double horizon, double radius,
                                         int samples, std::uint64_t seed);

struct CauchyProblem {
    CauchyProblem(RhsFunction rhs, FracOrder alpha, Vector x0, double horizon);

    RhsFunction rhs;
    FracOrder alpha;
    Vector x0;
    double horizon;
};

struct AprioriBounds {
    double R;   // sup-norm bound on the state
    double H;   // Hoelder-alpha constant (diagnostic, see apriori_bounds)
    double R0;  // radius of the initial ball
};

/// R = (1 + R0) E_alpha(c_f T^alpha) - 1 for every solution started in B(R0).
///
/// The Hoelder constant has no closed form; H is reported as
/// (1 + R) c_f T^alpha / Gamma(alpha + 1), the bound one gets for a constant
/// integrand of size (1 + R) c_f. Use holder_modulus on actual trajectories
/// for a measured value.
[[nodiscard]] AprioriBounds apriori_bounds(double R0, double c_f, FracOrder alpha, double horizon);

/// x(t_m) = x0 + sum_{j<m} w(m, j) f(t_j, x(t_j)) with product-rectangle
/// weights. Keeps the full memory (O(N^2) work). Throws NumericError naming
/// the node when f returns a non-finite value.
[[nodiscard]] Trajectory solve_euler(const CauchyProblem& problem, const TimeGrid& grid);

/// Discrete defect of the integral equation:
/// sup_m | x(t_m) - (x0 + I^alpha[f(., x(.))](t_m)) |.
/// Zero for the solver's own output on the same grid.
[[nodiscard]] double check_solution_residual(const CauchyProblem& problem, const Trajectory& x);

}  // namespace fracguide
