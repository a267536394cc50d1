#include "fracguide/game_model.hpp"

#include "fracguide/error.hpp"
#include "fracguide/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fracguide {

// ---------------------------------------------------------------------------
// ActionSet
// ---------------------------------------------------------------------------

ActionSet ActionSet::ball(double radius, Eigen::Index dim) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw DomainError("ball action set needs a positive finite radius");
    }
    if (dim < 1) throw DomainError("ball action set needs a positive dimension");
    return ActionSet(Ball{radius, dim});
}

ActionSet ActionSet::finite(std::vector<Vector> points) {
    if (points.empty()) throw DomainError("finite action set must be nonempty");
    const Eigen::Index dim = points.front().size();
    if (dim < 1) throw DomainError("finite action set points must be nonempty vectors");
    for (const auto& p : points) {
        if (p.size() != dim) throw DomainError("finite action set points differ in length");
        if (!p.allFinite()) throw DomainError("finite action set points must be finite");
    }
    return ActionSet(Finite{std::move(points)});
}

Eigen::Index ActionSet::dim() const {
    if (is_ball()) return as_ball().dim;
    return as_finite().points.front().size();
}

bool ActionSet::contains(const Vector& v) const {
    if (v.size() != dim()) return false;
    if (is_ball()) return v.norm() <= as_ball().radius + 1e-12;
    const auto& pts = as_finite().points;
    return std::any_of(pts.begin(), pts.end(), [&](const Vector& p) { return p == v; });
}

// ---------------------------------------------------------------------------
// GameDynamics
// ---------------------------------------------------------------------------

GameDynamics::GameDynamics(std::variant<SeparableAffine, Blackbox> s, Eigen::Index n,
                           Eigen::Index n_u, Eigen::Index n_v, double lambda_g, double c_g)
    : structure_(std::move(s)), n_(n), n_u_(n_u), n_v_(n_v), lambda_g_(lambda_g), c_g_(c_g) {
    if (n_ < 1 || n_u_ < 1 || n_v_ < 1) throw DomainError("game dimensions must be positive");
    if (!(lambda_g_ > 0.0)) throw DomainError("lambda_g must be positive");
    if (!(c_g_ > 0.0)) throw DomainError("c_g must be positive");
}

GameDynamics GameDynamics::separable_affine(Drift drift, Matrix B, Matrix C, double lambda_g,
                                            double c_g) {
    if (!drift) throw DomainError("separable dynamics need a drift");
    if (B.rows() != C.rows()) throw DomainError("B and C must have the same number of rows");
    const Eigen::Index n = B.rows();
    const Eigen::Index n_u = B.cols();
    const Eigen::Index n_v = C.cols();
    return GameDynamics(SeparableAffine{std::move(drift), std::move(B), std::move(C)}, n, n_u, n_v,
                        lambda_g, c_g);
}

GameDynamics GameDynamics::blackbox(Eval eval, Eigen::Index n, Eigen::Index n_u, Eigen::Index n_v,
                                    double lambda_g, double c_g) {
    if (!eval) throw DomainError("blackbox dynamics need an evaluator");
    return GameDynamics(Blackbox{std::move(eval)}, n, n_u, n_v, lambda_g, c_g);
}

GameDynamics& GameDynamics::with_time_lipschitz(double L) {
    if (!(L >= 0.0) || !std::isfinite(L)) throw DomainError("time Lipschitz constant must be >= 0");
    time_lipschitz_ = L;
    return *this;
}

Vector GameDynamics::operator()(double t, const Vector& x, const Vector& u, const Vector& v) const {
    if (x.size() != n_ || u.size() != n_u_ || v.size() != n_v_) {
        throw DomainError("dynamics evaluated with inconsistent dimensions");
    }
    Vector out;
    if (const auto* sep = std::get_if<SeparableAffine>(&structure_)) {
        out = sep->drift(t, x) + sep->B * u + sep->C * v;
    } else {
        out = std::get<Blackbox>(structure_).eval(t, x, u, v);
    }
    if (out.size() != n_) throw DomainError("dynamics returned a vector of the wrong length");
    return out;
}

// ---------------------------------------------------------------------------
// Selectors
// ---------------------------------------------------------------------------

namespace {

void check_dims(const GameDynamics& dyn, const Vector& x, const Vector& s, const ActionSet& P,
                const ActionSet& Q) {
    if (x.size() != dyn.n() || s.size() != dyn.n() || P.dim() != dyn.n_u() || Q.dim() != dyn.n_v()) {
        throw DomainError("selector called with inconsistent dimensions");
    }
}

// Minimizer (sign = -1) or maximizer (sign = +1) of <w, a> over a set.
Vector linear_extremum(const Vector& w, const ActionSet& set, double sign) {
    if (set.is_ball()) {
        const auto& ball = set.as_ball();
        const double norm = w.norm();
        if (norm == 0.0) return Vector::Zero(ball.dim);
        return (sign * ball.radius / norm) * w;
    }
    const auto& pts = set.as_finite().points;
    std::size_t best = 0;
    double best_val = sign * w.dot(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double val = sign * w.dot(pts[i]);
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    return pts[best];
}

// Payoff <s, g(t, x, P_i, Q_j)> for finite sets.
Matrix payoff(const GameDynamics& dyn, double t, const Vector& x, const Vector& s,
              const ActionSet& P, const ActionSet& Q) {
    const auto& ps = P.as_finite().points;
    const auto& qs = Q.as_finite().points;
    Matrix a(static_cast<Eigen::Index>(ps.size()), static_cast<Eigen::Index>(qs.size()));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = 0; j < qs.size(); ++j) {
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s.dot(dyn(t, x, ps[i], qs[j]));
        }
    }
    return a;
}

void require_finite_sets(const ActionSet& P, const ActionSet& Q) {
    if (P.is_ball() || Q.is_ball()) {
        throw UnsupportedError(
            "blackbox dynamics over ball action sets have no finite min-max certificate");
    }
}

}  // namespace

Vector extremal_u(const GameDynamics& dyn, double t, const Vector& x, const Vector& s,
                  const ActionSet& P, const ActionSet& Q) {
    check_dims(dyn, x, s, P, Q);
    if (dyn.is_separable()) {
        return linear_extremum(dyn.separable().B.transpose() * s, P, -1.0);
    }
    require_finite_sets(P, Q);
    const Matrix a = payoff(dyn, t, x, s, P, Q);
    Eigen::Index best = 0;
    double best_val = a.row(0).maxCoeff();
    for (Eigen::Index i = 1; i < a.rows(); ++i) {
        const double val = a.row(i).maxCoeff();
        if (val < best_val) {
            best_val = val;
            best = i;
        }
    }
    return P.as_finite().points[static_cast<std::size_t>(best)];
}

Vector extremal_v(const GameDynamics& dyn, double t, const Vector& x, const Vector& s,
                  const ActionSet& P, const ActionSet& Q) {
    check_dims(dyn, x, s, P, Q);
    if (dyn.is_separable()) {
        return linear_extremum(dyn.separable().C.transpose() * s, Q, 1.0);
    }
    require_finite_sets(P, Q);
    const Matrix a = payoff(dyn, t, x, s, P, Q);
    Eigen::Index best = 0;
    double best_val = a.col(0).minCoeff();
    for (Eigen::Index j = 1; j < a.cols(); ++j) {
        const double val = a.col(j).minCoeff();
        if (val > best_val) {
            best_val = val;
            best = j;
        }
    }
    return Q.as_finite().points[static_cast<std::size_t>(best)];
}

SaddleValues check_saddle(const GameDynamics& dyn, double t, const Vector& x, const Vector& s,
                          const ActionSet& P, const ActionSet& Q) {
    check_dims(dyn, x, s, P, Q);
    if (dyn.is_separable()) {
        // <s, g> = <s, drift> + <B^T s, u> + <C^T s, v> splits, so the inner
        // extremum does not depend on the outer variable.
        const Vector u_star = extremal_u(dyn, t, x, s, P, Q);
        const Vector v_star = extremal_v(dyn, t, x, s, P, Q);
        const double minmax = s.dot(dyn(t, x, u_star, v_star));
        const double maxmin = s.dot(dyn(t, x, u_star, v_star));
        return {minmax, maxmin, minmax - maxmin};
    }
    require_finite_sets(P, Q);
    const Matrix a = payoff(dyn, t, x, s, P, Q);
    const double minmax = a.rowwise().maxCoeff().minCoeff();
    const double maxmin = a.colwise().minCoeff().maxCoeff();
    return {minmax, maxmin, minmax - maxmin};
}

Vector sample_action(const ActionSet& set, Rng& rng) {
    if (set.is_ball()) return rng.in_ball(set.as_ball().dim, set.as_ball().radius);
    const auto& pts = set.as_finite().points;
    return pts[static_cast<std::size_t>(rng.below(pts.size()))];
}

double estimate_lambda_g(const GameDynamics& dyn, double horizon, double radius,
                         const ActionSet& P, const ActionSet& Q, int probes, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
        const double t = horizon * rng.uniform();
        const Vector x = rng.in_ball(dyn.n(), radius);
        const Vector y = rng.in_ball(dyn.n(), radius);
        const Vector u = sample_action(P, rng);
        const Vector v = sample_action(Q, rng);
        const double dist = (x - y).norm();
        if (dist == 0.0) continue;
        worst = std::max(worst, (dyn(t, x, u, v) - dyn(t, y, u, v)).norm() / dist);
    }
    return worst;
}

double estimate_growth(const GameDynamics& dyn, double horizon, double radius, const ActionSet& P,
                       const ActionSet& Q, int probes, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
        const double t = horizon * rng.uniform();
        const Vector x = rng.in_ball(dyn.n(), radius);
        const Vector u = sample_action(P, rng);
        const Vector v = sample_action(Q, rng);
        worst = std::max(worst, dyn(t, x, u, v).norm() / (1.0 + x.norm()));
    }
    return worst;
}

}  // namespace fracguide
