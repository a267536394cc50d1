#pragma once

// Conflict-controlled dynamics g(t, x, u, v), compact action sets, and the
// extremal (min-max / max-min) selectors of the aiming procedure.

#include "fracguide/frac_core.hpp"
#include "fracguide/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace fracguide {

/// Compact action set: a closed Euclidean ball centred at the origin, or a
/// finite list of points.
class ActionSet {
public:
    struct Ball {
        double radius;
        Eigen::Index dim;
    };
    struct Finite {
        std::vector<Vector> points;
    };

    static ActionSet ball(double radius, Eigen::Index dim);
    static ActionSet finite(std::vector<Vector> points);

    [[nodiscard]] Eigen::Index dim() const;
    [[nodiscard]] bool is_ball() const { return std::holds_alternative<Ball>(kind_); }
    [[nodiscard]] const Ball& as_ball() const { return std::get<Ball>(kind_); }
    [[nodiscard]] const Finite& as_finite() const { return std::get<Finite>(kind_); }

    /// Ball: |v| <= radius + 1e-12. Finite: exact membership.
    [[nodiscard]] bool contains(const Vector& v) const;

private:
    explicit ActionSet(std::variant<Ball, Finite> kind) : kind_(std::move(kind)) {}

    std::variant<Ball, Finite> kind_;
};

class GameDynamics {
public:
    using Drift = std::function<Vector(double, const Vector&)>;
    using Eval = std::function<Vector(double, const Vector&, const Vector&, const Vector&)>;

    /// g = drift(t, x) + B u + C v.
    struct SeparableAffine {
        Drift drift;
        Matrix B;
        Matrix C;
    };
    struct Blackbox {
        Eval eval;
    };

    /// lambda_g: Lipschitz constant of g in x; c_g: growth constant with
    /// |g| <= (1 + |x|) c_g. Both must be positive.
    static GameDynamics separable_affine(Drift drift, Matrix B, Matrix C, double lambda_g,
                                         double c_g);
    static GameDynamics blackbox(Eval eval, Eigen::Index n, Eigen::Index n_u, Eigen::Index n_v,
                                 double lambda_g, double c_g);

    [[nodiscard]] Vector operator()(double t, const Vector& x, const Vector& u, const Vector& v) const;

    [[nodiscard]] bool is_separable() const {
        return std::holds_alternative<SeparableAffine>(structure_);
    }
    [[nodiscard]] const SeparableAffine& separable() const {
        return std::get<SeparableAffine>(structure_);
    }

    [[nodiscard]] Eigen::Index n() const noexcept { return n_; }
    [[nodiscard]] Eigen::Index n_u() const noexcept { return n_u_; }
    [[nodiscard]] Eigen::Index n_v() const noexcept { return n_v_; }
    [[nodiscard]] double lambda_g() const noexcept { return lambda_g_; }
    [[nodiscard]] double c_g() const noexcept { return c_g_; }

    /// Optional Lipschitz constant of g in t, L with
    /// |g(t, x, u, v) - g(s, x, u, v)| <= L |t - s|. Needed for delta_1.
    [[nodiscard]] std::optional<double> time_lipschitz() const noexcept { return time_lipschitz_; }
    GameDynamics& with_time_lipschitz(double L);

private:
    GameDynamics(std::variant<SeparableAffine, Blackbox> s, Eigen::Index n, Eigen::Index n_u,
                 Eigen::Index n_v, double lambda_g, double c_g);

    std::variant<SeparableAffine, Blackbox> structure_;
    Eigen::Index n_;
    Eigen::Index n_u_;
    Eigen::Index n_v_;
    double lambda_g_;
    double c_g_;
    std::optional<double> time_lipschitz_;
};

/// u* in argmin_{u in P} max_{v in Q} <s, g(t, x, u, v)>.
///
/// Separable dynamics: the v-term drops out; a ball gives the closed form
/// -r_P B^T s / |B^T s| (0 when B^T s = 0), a finite set the lowest-index
/// minimizer. Blackbox dynamics need both sets finite (enumeration);
/// otherwise UnsupportedError.
[[nodiscard]] Vector extremal_u(const GameDynamics& dyn, double t, const Vector& x, const Vector& s,
                                const ActionSet& P, const ActionSet& Q);

/// v* in argmax_{v in Q} min_{u in P} <s, g(t, x, u, v)>; mirror image of
/// extremal_u with closed form +r_Q C^T s / |C^T s|.
[[nodiscard]] Vector extremal_v(const GameDynamics& dyn, double t, const Vector& x, const Vector& s,
                                const ActionSet& P, const ActionSet& Q);

struct SaddleValues {
    double minmax;
    double maxmin;
    double gap;  // minmax - maxmin
};

/// Both sides of the saddle-point condition for <s, g>. Separable dynamics
/// (any supported sets) and blackbox dynamics over finite x finite sets.
[[nodiscard]] SaddleValues check_saddle(const GameDynamics& dyn, double t, const Vector& x,
                                        const Vector& s, const ActionSet& P, const ActionSet& Q);

/// Diagnostic: largest |g(t, x, u, v) - g(t, y, u, v)| / |x - y| over random
/// probes with x, y in B(radius), u in P, v in Q (balls sampled uniformly,
/// finite sets by index).
[[nodiscard]] double estimate_lambda_g(const GameDynamics& dyn, double horizon, double radius,
                                       const ActionSet& P, const ActionSet& Q, int probes,
                                       std::uint64_t seed);

/// Diagnostic: largest |g| / (1 + |x|) over random probes; compare with c_g.
[[nodiscard]] double estimate_growth(const GameDynamics& dyn, double horizon, double radius,
                                     const ActionSet& P, const ActionSet& Q, int probes,
                                     std::uint64_t seed);

/// Uniform draw from an action set.
[[nodiscard]] Vector sample_action(const ActionSet& set, Rng& rng);

}  // namespace fracguide
