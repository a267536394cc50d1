#pragma once

// Grid verification of the convex-Lyapunov fractional derivative inequality
//
//   (D^alpha y)(t) <= <grad V(x(t)), (D^alpha x)(t)>,   y(t) = V(x(t)),
//
// with both derivatives estimated by the L1 scheme.

#include "fracguide/frac_core.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fracguide {

/// Convex V with V(0) = 0, its gradient, and the gradient Lipschitz constant
/// on the working ball.
struct LyapunovFn {
    using Value = std::function<double(const Vector&)>;
    using Gradient = std::function<Vector(const Vector&)>;

    LyapunovFn(std::string name, Value value, Gradient gradient, double lambda_V);

    /// |x|^2
    static LyapunovFn quadratic();
    /// log(sum_i exp(x_i)) - log(n); dimension fixed by the argument.
    static LyapunovFn log_sum_exp();
    /// |x|^2 + weight * |x|^4, lambda_V valid on B(radius).
    static LyapunovFn quartic_regularized(double weight, double radius);

    std::string name;
    Value value;
    Gradient gradient;
    double lambda_V;
};

struct LyapunovValidation {
    double value_at_origin = 0.0;
    double worst_convexity_gap = 0.0;   // max of V(mid) - (V(a) + V(b)) / 2, <= 0 when convex
    double worst_gradient_error = 0.0;  // max relative central-difference mismatch
    [[nodiscard]] bool ok() const {
        return std::abs(value_at_origin) <= 1e-12 && worst_convexity_gap <= 1e-12 &&
               worst_gradient_error <= 1e-6;
    }
};

/// Probabilistic spot checks of V.1 (V(0) = 0), convexity on `segments`
/// random segments of B(radius), and gradient consistency against central
/// finite differences.
[[nodiscard]] LyapunovValidation validate_lyapunov(const LyapunovFn& V, Eigen::Index dim,
                                                   double radius, int segments,
                                                   std::uint64_t seed);

struct InequalityReport {
    TimeGrid grid;
    std::vector<double> lhs;  // L1 estimate of D^alpha (V o x)
    std::vector<double> rhs;  // <grad V(x), L1 estimate of D^alpha x>
    double max_violation;     // max over nodes 1..N of lhs - rhs
    double tolerance_used;

    // Smooth-case diagnostics: max |grad V| along x, max |D^alpha x|, and the
    // bound 2 lambda_V H^2 T^alpha / Gamma(1 - alpha) + M_V w built from them
    // with H the empirical Hoelder modulus of x.
    double max_gradient_norm = 0.0;
    double max_derivative_norm = 0.0;
    double smooth_case_bound = 0.0;

    [[nodiscard]] bool violated() const { return max_violation > tolerance_used; }
};

/// Constant C in tol = C h^(1 - alpha), calibrated as the largest
/// |L1 - exact| / h^(1 - alpha) at t = 1 over the power-rule battery
/// (beta in {0, 0.5, 1, 2}, alpha in {0.25, 0.5, 0.75}, N in 256..2048),
/// rounded up.
inline constexpr double kL1ToleranceConstant = 3.0e-3;

/// kL1ToleranceConstant * h^(1 - alpha).
[[nodiscard]] double l1_tolerance(FracOrder alpha, double step);

/// x - x(0), so that Caputo and Riemann-Liouville derivatives agree.
[[nodiscard]] Trajectory shift_to_origin(const Trajectory& x);

/// Checks the inequality at every grid node. x must sit on a uniform grid
/// with |x(0)| <= 1e-12 (use shift_to_origin first); DomainError otherwise.
[[nodiscard]] InequalityReport check_convex_inequality(const LyapunovFn& V, const Trajectory& x,
                                                       FracOrder alpha, double tol);

/// V(x) = |x|^2 specialization: (D^alpha |x|^2)(t) <= 2 <x(t), (D^alpha x)(t)>.
[[nodiscard]] InequalityReport check_quadratic_inequality(const Trajectory& x, FracOrder alpha,
                                                          double tol);

/// Deviation form used by the aiming analysis: for s(t) with arbitrary s(0),
/// nu(t) = |s(t)|^2 - |s(0)|^2 satisfies (D^alpha nu)(t) <= 2 <s(t), (^C D^alpha s)(t)>.
[[nodiscard]] InequalityReport check_deviation_inequality(const Trajectory& s, FracOrder alpha,
                                                          double tol);

}  // namespace fracguide
