#pragma once

// Special functions and discrete fractional operators on time grids.
//
// All fractional operators here are of order alpha in (0, 1). Grid functions
// store one column per node, so node m of a vector-valued function is
// values().col(m).

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace fracguide {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Fractional order alpha, strictly inside (0, 1).
class FracOrder {
public:
    explicit FracOrder(double alpha);

    [[nodiscard]] double value() const noexcept { return alpha_; }

    friend bool operator==(const FracOrder&, const FracOrder&) = default;

private:
    double alpha_;
};

/// Partition 0 = t_0 < t_1 < ... < t_N = T.
class TimeGrid {
public:
    /// Uniform grid with `steps` cells on [0, horizon].
    static TimeGrid uniform(double horizon, std::size_t steps);

    /// Arbitrary strictly increasing nodes starting at 0.
    static TimeGrid from_nodes(std::vector<double> nodes);

    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t cells() const noexcept { return nodes_.size() - 1; }
    [[nodiscard]] double horizon() const noexcept { return nodes_.back(); }
    [[nodiscard]] double operator[](std::size_t m) const { return nodes_[m]; }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }

    /// Largest step.
    [[nodiscard]] double diameter() const noexcept { return diameter_; }

    [[nodiscard]] bool is_uniform() const noexcept { return uniform_; }

    /// Step of a uniform grid; DomainError otherwise.
    [[nodiscard]] double step() const;

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) { return a.nodes_ == b.nodes_; }

private:
    TimeGrid(std::vector<double> nodes, bool uniform);

    std::vector<double> nodes_;
    double diameter_ = 0.0;
    bool uniform_ = false;
};

/// Vector-valued samples on a TimeGrid, stored as a dim x nodes matrix.
class GridFunction {
public:
    GridFunction(TimeGrid grid, Matrix values);

    /// Samples a callable `f(t) -> Vector` of length `dim` at every node.
    template <typename F>
    static GridFunction sample(const TimeGrid& grid, Eigen::Index dim, F&& f) {
        Matrix values(dim, static_cast<Eigen::Index>(grid.size()));
        for (std::size_t m = 0; m < grid.size(); ++m) {
            values.col(static_cast<Eigen::Index>(m)) = f(grid[m]);
        }
        return GridFunction(grid, std::move(values));
    }

    /// Scalar function from one value per node.
    static GridFunction scalar(const TimeGrid& grid, std::span<const double> values);

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] const Matrix& values() const noexcept { return values_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return values_.rows(); }
    [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }

    [[nodiscard]] Vector at(std::size_t m) const { return values_.col(static_cast<Eigen::Index>(m)); }

    /// Component 0 at node m; convenience for scalar functions.
    [[nodiscard]] double scalar_at(std::size_t m) const {
        return values_(0, static_cast<Eigen::Index>(m));
    }

    friend bool operator==(const GridFunction& a, const GridFunction& b) {
        return a.grid_ == b.grid_ && a.values_.rows() == b.values_.rows() &&
               a.values_.cols() == b.values_.cols() && a.values_ == b.values_;
    }

private:
    TimeGrid grid_;
    Matrix values_;
};

/// Discrete trajectory x(.) sampled on a grid.
using Trajectory = GridFunction;

/// Euler gamma function for z > 0 (Lanczos, g = 7, 9 coefficients).
[[nodiscard]] double gamma_fn(double z);

/// Largest |z| accepted by mittag_leffler.
inline constexpr double kMittagLefflerMaxArgument = 80.0;

/// One-parameter Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(alpha k + 1)
/// for alpha in (0, 1].
///
/// The series is accumulated in extended precision until terms fall below
/// 1e-18 of the partial sum. Evaluation throws RangeError when |z| > 80, when
/// the result overflows a double, or when cancellation between alternating
/// terms (negative z) would cost more than ~1e-10 relative accuracy. Callers
/// hitting the envelope must rescale the problem.
[[nodiscard]] double mittag_leffler(double alpha, double z);

/// Product-rectangle (fractional forward Euler) quadrature weights of the
/// Riemann-Liouville kernel on a grid:
///
///   w(m, j) = ((t_m - t_j)^alpha - (t_m - t_{j+1})^alpha) / Gamma(alpha + 1),
///
/// so that (I^alpha phi)(t_m) ~ sum_{j<m} w(m, j) phi(t_j). On uniform grids
/// the weights depend on m - j only and are tabulated once.
class ProductRectangleWeights {
public:
    ProductRectangleWeights(FracOrder alpha, const TimeGrid& grid);

    [[nodiscard]] double operator()(std::size_t m, std::size_t j) const;

    /// sum_{j<m} w(m, j) f.col(j); only the first m columns of f are read.
    [[nodiscard]] Vector accumulate(std::size_t m, const Matrix& f) const;

private:
    double alpha_;
    double inv_gamma_;
    std::vector<double> nodes_;
    // Uniform grids: lag_[k] = w(m, m-1-k).
    std::vector<double> lag_;
    bool uniform_;
};

/// Riemann-Liouville integral of order alpha sampled at grid nodes by the
/// left-endpoint product-rectangle rule. Node 0 is exactly zero.
[[nodiscard]] GridFunction rl_integral(FracOrder alpha, const GridFunction& phi);

/// L1 estimate of the Caputo derivative on a uniform grid:
///
///   D(t_n) = sum_{j<n} b_j (x_{n-j} - x_{n-j-1}) / (Gamma(2 - alpha) h^alpha),
///   b_j = (j+1)^{1-alpha} - j^{1-alpha}.
///
/// Node 0 is set to zero. Throws DomainError on non-uniform grids.
[[nodiscard]] GridFunction caputo_derivative_l1(FracOrder alpha, const GridFunction& x);

/// Empirical Hoelder-alpha constant: max over node pairs of
/// |x(t) - x(s)| / |t - s|^alpha (Euclidean norm).
[[nodiscard]] double holder_modulus(const GridFunction& x, FracOrder alpha);

/// Bellman-Gronwall bound eps * E_alpha(lambda t^alpha).
[[nodiscard]] double gronwall_bound(double eps, double lambda, FracOrder alpha, double t);

}  // namespace fracguide
