#include "fracguide/frac_core.hpp"

#include "fracguide/error.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>

namespace fracguide {

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("fractional order must lie strictly inside (0, 1), got " +
                          std::to_string(alpha));
    }
}

// ---------------------------------------------------------------------------
// TimeGrid
// ---------------------------------------------------------------------------

TimeGrid::TimeGrid(std::vector<double> nodes, bool uniform)
    : nodes_(std::move(nodes)), uniform_(uniform) {
    for (std::size_t m = 1; m < nodes_.size(); ++m) {
        diameter_ = std::max(diameter_, nodes_[m] - nodes_[m - 1]);
    }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("time grid horizon must be positive and finite");
    }
    if (steps == 0) {
        throw DomainError("time grid needs at least one step");
    }
    std::vector<double> nodes(steps + 1);
    for (std::size_t m = 0; m <= steps; ++m) {
        nodes[m] = horizon * static_cast<double>(m) / static_cast<double>(steps);
    }
    nodes.back() = horizon;
    return TimeGrid(std::move(nodes), true);
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 2) {
        throw DomainError("time grid needs at least two nodes");
    }
    if (nodes.front() != 0.0) {
        throw DomainError("time grid must start at 0");
    }
    for (std::size_t m = 1; m < nodes.size(); ++m) {
        if (!(nodes[m] > nodes[m - 1]) || !std::isfinite(nodes[m])) {
            throw DomainError("time grid nodes must be finite and strictly increasing (node " +
                              std::to_string(m) + ")");
        }
    }
    // Uniform up to text round-off of the node values.
    const double h = nodes.back() / static_cast<double>(nodes.size() - 1);
    bool uniform = true;
    for (std::size_t m = 1; m < nodes.size() && uniform; ++m) {
        uniform = std::abs(nodes[m] - h * static_cast<double>(m)) <= 1e-9 * h;
    }
    return TimeGrid(std::move(nodes), uniform);
}

double TimeGrid::step() const {
    if (!uniform_) {
        throw DomainError("operation requires a uniform time grid");
    }
    return horizon() / static_cast<double>(cells());
}

// ---------------------------------------------------------------------------
// GridFunction
// ---------------------------------------------------------------------------

GridFunction::GridFunction(TimeGrid grid, Matrix values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.cols()) != grid_.size()) {
        throw DomainError("grid function has " + std::to_string(values_.cols()) +
                          " samples for a grid of " + std::to_string(grid_.size()) + " nodes");
    }
    if (values_.rows() < 1) {
        throw DomainError("grid function dimension must be positive");
    }
}

GridFunction GridFunction::scalar(const TimeGrid& grid, std::span<const double> values) {
    Matrix m(1, static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) m(0, static_cast<Eigen::Index>(i)) = values[i];
    return GridFunction(grid, std::move(m));
}

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

double lanczos_gamma(double z) {
    if (z < 0.5) {
        // Reflection keeps the series in its accurate half-plane.
        return std::numbers::pi / (std::sin(std::numbers::pi * z) * lanczos_gamma(1.0 - z));
    }
    z -= 1.0;
    double x = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        x += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    }
    const double t = z + kLanczosG + 0.5;
    const double half = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * x;
}

}  // namespace

double gamma_fn(double z) {
    if (!(z > 0.0)) {
        throw DomainError("gamma_fn requires z > 0, got " + std::to_string(z));
    }
    return lanczos_gamma(z);
}

double mittag_leffler(double alpha, double z) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("mittag_leffler requires alpha in (0, 1], got " + std::to_string(alpha));
    }
    if (!std::isfinite(z) || std::abs(z) > kMittagLefflerMaxArgument) {
        throw RangeError("mittag_leffler argument " + std::to_string(z) +
                         " outside the working envelope |z| <= 80");
    }
    if (z == 0.0) return 1.0;

    const long double log_abs_z = std::log(std::abs(static_cast<long double>(z)));
    const long double a = alpha;
    long double sum = 1.0L;
    long double error_bound = LDBL_EPSILON;
    long double prev_abs = 1.0L;
    constexpr int kMaxTerms = 20000;

    for (int k = 1; k <= kMaxTerms; ++k) {
        const long double lg = std::lgamma(a * k + 1.0L);
        const long double exponent = static_cast<long double>(k) * log_abs_z - lg;
        const long double magnitude = std::exp(exponent);
        const long double term = (z < 0.0 && (k % 2 == 1)) ? -magnitude : magnitude;
        sum += term;
        if (!std::isfinite(sum)) throw RangeError("mittag_leffler overflows double precision");
        // Absolute error of exp(exponent) grows with |exponent| and with the
        // size of the addends we cancel against.
        error_bound += magnitude * LDBL_EPSILON *
                       (4.0L + std::abs(static_cast<long double>(k) * log_abs_z) + std::abs(lg));
        if (magnitude <= prev_abs && magnitude < 1e-18L * std::abs(sum)) {
            break;
        }
        if (k == kMaxTerms) {
            throw RangeError("mittag_leffler series did not converge");
        }
        prev_abs = magnitude;
    }

    if (error_bound > 1e-10L * std::abs(sum)) {
        throw RangeError("mittag_leffler(" + std::to_string(alpha) + ", " + std::to_string(z) +
                         ") loses accuracy to cancellation; rescale the problem");
    }
    const auto result = static_cast<double>(sum);
    if (!std::isfinite(result)) {
        throw RangeError("mittag_leffler overflows double precision");
    }
    return result;
}

// ---------------------------------------------------------------------------
// Discrete operators
// ---------------------------------------------------------------------------

ProductRectangleWeights::ProductRectangleWeights(FracOrder alpha, const TimeGrid& grid)
    : alpha_(alpha.value()),
      inv_gamma_(1.0 / gamma_fn(alpha.value() + 1.0)),
      nodes_(grid.nodes().begin(), grid.nodes().end()),
      uniform_(grid.is_uniform()) {
    if (uniform_) {
        const double h_alpha = std::pow(grid.step(), alpha_);
        lag_.resize(grid.cells());
        for (std::size_t k = 0; k < lag_.size(); ++k) {
            const auto kd = static_cast<double>(k);
            lag_[k] = h_alpha * (std::pow(kd + 1.0, alpha_) - std::pow(kd, alpha_)) * inv_gamma_;
        }
    }
}

double ProductRectangleWeights::operator()(std::size_t m, std::size_t j) const {
    if (uniform_) return lag_[m - 1 - j];
    return (std::pow(nodes_[m] - nodes_[j], alpha_) - std::pow(nodes_[m] - nodes_[j + 1], alpha_)) *
           inv_gamma_;
}

Vector ProductRectangleWeights::accumulate(std::size_t m, const Matrix& f) const {
    const Eigen::Index dim = f.rows();
    Vector acc = Vector::Zero(dim);
    const double* data = f.data();
    double* out = acc.data();
    for (std::size_t j = 0; j < m; ++j) {
        const double w = (*this)(m, j);
        const double* col = data + static_cast<std::ptrdiff_t>(j) * dim;
        for (Eigen::Index r = 0; r < dim; ++r) out[r] += w * col[r];
    }
    return acc;
}

GridFunction rl_integral(FracOrder alpha, const GridFunction& phi) {
    const ProductRectangleWeights weights(alpha, phi.grid());
    Matrix out = Matrix::Zero(phi.dim(), static_cast<Eigen::Index>(phi.size()));
    for (std::size_t m = 1; m < phi.size(); ++m) {
        out.col(static_cast<Eigen::Index>(m)) = weights.accumulate(m, phi.values());
    }
    return GridFunction(phi.grid(), std::move(out));
}

GridFunction caputo_derivative_l1(FracOrder alpha, const GridFunction& x) {
    const TimeGrid& grid = x.grid();
    const double a = alpha.value();
    const double scale = 1.0 / (gamma_fn(2.0 - a) * std::pow(grid.step(), a));
    const std::size_t n_nodes = x.size();
    const Eigen::Index dim = x.dim();

    std::vector<double> b(n_nodes);
    for (std::size_t j = 0; j < n_nodes; ++j) {
        const auto jd = static_cast<double>(j);
        b[j] = std::pow(jd + 1.0, 1.0 - a) - std::pow(jd, 1.0 - a);
    }

    // diffs.col(i) = x_{i+1} - x_i
    const Matrix& v = x.values();
    Matrix diffs(dim, static_cast<Eigen::Index>(n_nodes - 1));
    for (std::size_t i = 0; i + 1 < n_nodes; ++i) {
        diffs.col(static_cast<Eigen::Index>(i)) =
            v.col(static_cast<Eigen::Index>(i + 1)) - v.col(static_cast<Eigen::Index>(i));
    }

    Matrix out = Matrix::Zero(dim, static_cast<Eigen::Index>(n_nodes));
    const double* d = diffs.data();
    for (std::size_t n = 1; n < n_nodes; ++n) {
        double* o = out.data() + static_cast<std::ptrdiff_t>(n) * dim;
        for (std::size_t j = 0; j < n; ++j) {
            const double* col = d + static_cast<std::ptrdiff_t>(n - j - 1) * dim;
            for (Eigen::Index r = 0; r < dim; ++r) o[r] += b[j] * col[r];
        }
        for (Eigen::Index r = 0; r < dim; ++r) o[r] *= scale;
    }
    return GridFunction(grid, std::move(out));
}

double holder_modulus(const GridFunction& x, FracOrder alpha) {
    const TimeGrid& grid = x.grid();
    const std::size_t n = x.size();
    const double a = alpha.value();
    const Eigen::Index dim = x.dim();
    const double* v = x.values().data();

    std::vector<double> lag_pow;
    if (grid.is_uniform()) {
        lag_pow.resize(n);
        const double h = grid.step();
        for (std::size_t k = 1; k < n; ++k) lag_pow[k] = std::pow(h * static_cast<double>(k), a);
    }

    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = v + static_cast<std::ptrdiff_t>(i) * dim;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* xj = v + static_cast<std::ptrdiff_t>(j) * dim;
            double sq = 0.0;
            for (Eigen::Index r = 0; r < dim; ++r) {
                const double d = xj[r] - xi[r];
                sq += d * d;
            }
            const double denom =
                grid.is_uniform() ? lag_pow[j - i] : std::pow(grid[j] - grid[i], a);
            best = std::max(best, std::sqrt(sq) / denom);
        }
    }
    return best;
}

double gronwall_bound(double eps, double lambda, FracOrder alpha, double t) {
    if (!(eps >= 0.0) || !(lambda >= 0.0) || !(t >= 0.0)) {
        throw DomainError("gronwall_bound requires eps, lambda, t >= 0");
    }
    if (eps == 0.0) return 0.0;
    return eps * mittag_leffler(alpha.value(), lambda * std::pow(t, alpha.value()));
}

}  // namespace fracguide
