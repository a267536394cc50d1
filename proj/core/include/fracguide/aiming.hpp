#pragma once

// Mutual aiming between a conflict-controlled system and its guide.
//
// At every partition node tau_j, with s = x(tau_j) - y(tau_j), the system
// control u_j minimizes max_v <s, g(tau_j, x(tau_j), u, v)> over P and the
// guide disturbance v~_j maximizes min_u <s, g(tau_j, x(tau_j), u, v)> over
// Q. The disturbance v_j and guide control u~_j come from their policies.
// Controls are frozen on [tau_j, tau_{j+1}) and both motions are advanced by
// the fractional forward Euler scheme with full memory.

#include "fracguide/frac_core.hpp"
#include "fracguide/game_model.hpp"
#include "fracguide/lyapunov_check.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace fracguide {

/// Piecewise-constant realization: values[j] is active on [t_j, t_{j+1}).
struct ControlRealization {
    ControlRealization(TimeGrid grid, std::vector<Vector> values);

    /// Every value lies in `set`.
    [[nodiscard]] bool within(const ActionSet& set) const;

    TimeGrid grid;
    std::vector<Vector> values;
};

/// Extremal-shift selector (system u, guide v~ only).
struct ExtremalPolicy {
    friend bool operator==(const ExtremalPolicy&, const ExtremalPolicy&) = default;
};
/// Independent uniform draw from the action set on every partition cell.
struct SeededRandomPolicy {
    std::uint64_t seed;
    friend bool operator==(const SeededRandomPolicy&, const SeededRandomPolicy&) = default;
};
/// Prescribed values: one per partition cell, or a single value held on
/// every cell.
struct FixedPolicy {
    std::vector<Vector> values;
    friend bool operator==(const FixedPolicy& a, const FixedPolicy& b) {
        if (a.values.size() != b.values.size()) return false;
        for (std::size_t i = 0; i < a.values.size(); ++i) {
            if (a.values[i].size() != b.values[i].size() || a.values[i] != b.values[i]) return false;
        }
        return true;
    }
};
/// Worst case for proximity (disturbance v, guide u~ only): v maximizes
/// <s, g(x, u_j, v)>, u~ minimizes <s, g(y, u~, v~_j)>.
struct AdversarialPolicy {
    friend bool operator==(const AdversarialPolicy&, const AdversarialPolicy&) = default;
};

using ControlPolicy = std::variant<ExtremalPolicy, SeededRandomPolicy, FixedPolicy, AdversarialPolicy>;

/// RNG stream ids of the four control slots; a SeededRandomPolicy with seed
/// k draws slot i from Rng(stream_seed(k, i)).
enum class ControlSlot : std::uint64_t { SystemU = 0, SystemV = 1, GuideU = 2, GuideV = 3 };

struct AimingConfig {
    GameDynamics dyn;
    FracOrder alpha;
    double horizon;
    ActionSet P;
    ActionSet Q;
    Vector x0;
    Vector y0;
    TimeGrid partition;
    ControlPolicy disturbance = SeededRandomPolicy{0};  // v in the system
    ControlPolicy guide_u = SeededRandomPolicy{0};      // u~ in the guide
    ControlPolicy system_u = ExtremalPolicy{};          // u in the system
    ControlPolicy guide_v = ExtremalPolicy{};           // v~ in the guide
    /// Euler steps per partition cell (controls stay frozen on the cell).
    int substeps = 1;
    /// epsilon of the reported bound eps + K |x0 - y0|.
    double eps = 0.1;

    /// Throws DomainError naming the first violated invariant.
    void validate() const;
};

struct SimulationResult {
    Trajectory x;
    Trajectory y;
    ControlRealization u;
    ControlRealization v;
    ControlRealization u_tilde;
    ControlRealization v_tilde;
    double deviation_sup;  // max over partition nodes of |x - y|
    double bound_rhs;      // eps + K |x0 - y0|
    double K;              // sqrt(E_alpha(2 lambda_g T^alpha)); +inf outside the ML envelope
    std::optional<std::uint64_t> seed;
};

/// Runs the coupled system/guide simulation. Deterministic for a given
/// config. Throws UnsupportedError from the selectors and NumericError on
/// non-finite states.
[[nodiscard]] SimulationResult run_aiming(const AimingConfig& config);

struct TheoremConstants {
    double K;
    double eta;
    double delta2;
    std::optional<double> delta1;  // empty unless the dynamics declare a time Lipschitz constant
    double delta;                  // min(delta1, delta2), or delta2 when delta1 is empty
    double R_bar;
    double H_bar;
};

/// Constants of the proximity guarantee |x - y|_inf <= eps + K |x0 - y0|:
///   K   = sqrt(E_alpha(2 lambda_g T^alpha))
///   eta = Gamma(alpha + 1) eps^2 / (2 T^alpha E_alpha(2 lambda_g T^alpha))
///   delta2^alpha = min(eta / (8 H (1 + R) c_g), eta / (16 R lambda_g H))
///   delta1 = eta / (16 R L_t) for a time Lipschitz constant L_t
/// R comes from apriori_bounds(R0, c_g, ...). H is `holder` when given (e.g.
/// a measured holder_modulus), else the a-priori diagnostic H.
[[nodiscard]] TheoremConstants theorem_constants(const GameDynamics& dyn, FracOrder alpha,
                                                 double horizon, double R0, double eps,
                                                 std::optional<double> holder = {});

struct DiameterPoint {
    double delta;
    double deviation_sup;
    double deviation_final;  // |x(T) - y(T)|
};

/// One run per diameter on uniform partitions with ceil(T / d) cells, same
/// policies and seeds. Diameters must be positive and sorted descending.
/// Runs execute concurrently; results are returned in input order.
[[nodiscard]] std::vector<DiameterPoint> deviation_vs_diameter(const AimingConfig& config,
                                                               std::span<const double> diameters);

/// s = x - y on the partition grid.
[[nodiscard]] Trajectory deviation(const SimulationResult& result);

/// Quadratic Lyapunov inequality along nu(t) = |s(t)|^2 - |x0 - y0|^2.
[[nodiscard]] InequalityReport verify_deviation_inequality(const SimulationResult& result,
                                                           FracOrder alpha, double tol);

}  // namespace fracguide
