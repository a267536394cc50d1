#include "fracguide/lyapunov_check.hpp"

#include "fracguide/error.hpp"
#include "fracguide/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fracguide {

LyapunovFn::LyapunovFn(std::string fn_name, Value fn_value, Gradient fn_gradient, double lipschitz)
    : name(std::move(fn_name)),
      value(std::move(fn_value)),
      gradient(std::move(fn_gradient)),
      lambda_V(lipschitz) {
    if (!value || !gradient) throw DomainError("Lyapunov function needs value and gradient");
    if (!(lambda_V > 0.0)) throw DomainError("lambda_V must be positive");
}

LyapunovFn LyapunovFn::quadratic() {
    return LyapunovFn(
        "quadratic", [](const Vector& x) { return x.squaredNorm(); },
        [](const Vector& x) -> Vector { return 2.0 * x; }, 2.0);
}

LyapunovFn LyapunovFn::log_sum_exp() {
    return LyapunovFn(
        "log_sum_exp",
        [](const Vector& x) {
            const double top = x.maxCoeff();
            const double s = (x.array() - top).exp().sum();
            return top + std::log(s) - std::log(static_cast<double>(x.size()));
        },
        [](const Vector& x) -> Vector {
            const Eigen::ArrayXd e = (x.array() - x.maxCoeff()).exp();
            return (e / e.sum()).matrix();
        },
        1.0);
}

LyapunovFn LyapunovFn::quartic_regularized(double weight, double radius) {
    if (!(weight >= 0.0) || !(radius > 0.0)) {
        throw DomainError("quartic_regularized requires weight >= 0 and radius > 0");
    }
    return LyapunovFn(
        "quartic_regularized",
        [weight](const Vector& x) {
            const double q = x.squaredNorm();
            return q + weight * q * q;
        },
        [weight](const Vector& x) -> Vector {
            return (2.0 + 4.0 * weight * x.squaredNorm()) * x;
        },
        2.0 + 12.0 * weight * radius * radius);
}

LyapunovValidation validate_lyapunov(const LyapunovFn& V, Eigen::Index dim, double radius,
                                     int segments, std::uint64_t seed) {
    Rng rng(seed);
    LyapunovValidation out;
    out.value_at_origin = V.value(Vector::Zero(dim));
    out.worst_convexity_gap = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < segments; ++i) {
        const Vector a = rng.in_ball(dim, radius);
        const Vector b = rng.in_ball(dim, radius);
        const double gap = V.value(0.5 * (a + b)) - 0.5 * (V.value(a) + V.value(b));
        out.worst_convexity_gap = std::max(out.worst_convexity_gap, gap);

        const Vector g = V.gradient(a);
        Vector fd(dim);
        for (Eigen::Index k = 0; k < dim; ++k) {
            const double step = 1e-5 * std::max(1.0, std::abs(a[k]));
            Vector hi = a;
            Vector lo = a;
            hi[k] += step;
            lo[k] -= step;
            fd[k] = (V.value(hi) - V.value(lo)) / (2.0 * step);
        }
        const double err = (fd - g).norm() / std::max(1.0, g.norm());
        out.worst_gradient_error = std::max(out.worst_gradient_error, err);
    }
    return out;
}

double l1_tolerance(FracOrder alpha, double step) {
    return kL1ToleranceConstant * std::pow(step, 1.0 - alpha.value());
}

Trajectory shift_to_origin(const Trajectory& x) {
    Matrix v = x.values();
    v.colwise() -= x.values().col(0);
    return Trajectory(x.grid(), std::move(v));
}

namespace {

// lhs from the samples of V(x(.)), rhs = <grad_m, D^alpha x>.
InequalityReport assemble(const Trajectory& x, const std::vector<double>& v_samples,
                          const std::vector<Vector>& grads, double lambda_V, FracOrder alpha,
                          double tol) {
    const TimeGrid& grid = x.grid();
    const GridFunction y = GridFunction::scalar(grid, v_samples);
    const GridFunction dy = caputo_derivative_l1(alpha, y);
    const GridFunction dx = caputo_derivative_l1(alpha, x);

    InequalityReport report{grid, {}, {}, -std::numeric_limits<double>::infinity(), tol};
    report.lhs.resize(grid.size());
    report.rhs.resize(grid.size());
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const auto col = static_cast<Eigen::Index>(m);
        report.lhs[m] = dy.scalar_at(m);
        report.rhs[m] = grads[m].dot(dx.values().col(col));
        if (m > 0) report.max_violation = std::max(report.max_violation, report.lhs[m] - report.rhs[m]);
        report.max_gradient_norm = std::max(report.max_gradient_norm, grads[m].norm());
        report.max_derivative_norm = std::max(report.max_derivative_norm, dx.values().col(col).norm());
    }

    const double a = alpha.value();
    const double H = holder_modulus(x, alpha);
    report.smooth_case_bound = 2.0 * lambda_V * H * H * std::pow(grid.horizon(), a) / gamma_fn(1.0 - a) +
                               report.max_gradient_norm * report.max_derivative_norm;
    return report;
}

void require_uniform(const Trajectory& x) {
    if (!x.grid().is_uniform()) {
        throw DomainError("Lyapunov inequality checks need a uniform grid");
    }
}

}  // namespace

InequalityReport check_convex_inequality(const LyapunovFn& V, const Trajectory& x, FracOrder alpha,
                                         double tol) {
    require_uniform(x);
    if (x.at(0).norm() > 1e-12) {
        throw DomainError("trajectory must start at the origin; apply shift_to_origin first");
    }
    std::vector<double> v_samples(x.size());
    std::vector<Vector> grads(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) {
        const Vector xm = x.at(m);
        v_samples[m] = V.value(xm);
        grads[m] = V.gradient(xm);
    }
    return assemble(x, v_samples, grads, V.lambda_V, alpha, tol);
}

InequalityReport check_quadratic_inequality(const Trajectory& x, FracOrder alpha, double tol) {
    require_uniform(x);
    if (x.at(0).norm() > 1e-12) {
        throw DomainError("trajectory must start at the origin; apply shift_to_origin first");
    }
    std::vector<double> v_samples(x.size());
    std::vector<Vector> grads(x.size());
    for (std::size_t m = 0; m < x.size(); ++m) {
        const Vector xm = x.at(m);
        v_samples[m] = xm.squaredNorm();
        grads[m] = 2.0 * xm;
    }
    return assemble(x, v_samples, grads, 2.0, alpha, tol);
}

InequalityReport check_deviation_inequality(const Trajectory& s, FracOrder alpha, double tol) {
    require_uniform(s);
    const double base = s.at(0).squaredNorm();
    std::vector<double> nu(s.size());
    std::vector<Vector> grads(s.size());
    for (std::size_t m = 0; m < s.size(); ++m) {
        const Vector sm = s.at(m);
        nu[m] = sm.squaredNorm() - base;
        grads[m] = 2.0 * sm;
    }
    return assemble(s, nu, grads, 2.0, alpha, tol);
}

}  // namespace fracguide
