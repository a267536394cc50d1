#include "fracguide/aiming.hpp"

#include "fracguide/error.hpp"
#include "fracguide/fde_solver.hpp"
#include "fracguide/rng.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>

namespace fracguide {

ControlRealization::ControlRealization(TimeGrid g, std::vector<Vector> vals)
    : grid(std::move(g)), values(std::move(vals)) {
    if (values.size() != grid.cells()) {
        throw DomainError("control realization needs one value per partition cell");
    }
}

bool ControlRealization::within(const ActionSet& set) const {
    return std::all_of(values.begin(), values.end(), [&](const Vector& v) { return set.contains(v); });
}

namespace {

bool is_extremal(const ControlPolicy& p) { return std::holds_alternative<ExtremalPolicy>(p); }
bool is_adversarial(const ControlPolicy& p) { return std::holds_alternative<AdversarialPolicy>(p); }

void validate_fixed(const ControlPolicy& p, const ActionSet& set, std::size_t cells, const char* slot) {
    const auto* fixed = std::get_if<FixedPolicy>(&p);
    if (!fixed) return;
    if (fixed->values.size() != 1 && fixed->values.size() != cells) {
        throw DomainError(std::string(slot) + ": fixed policy needs 1 or " + std::to_string(cells) +
                          " values, got " + std::to_string(fixed->values.size()));
    }
    for (const auto& v : fixed->values) {
        if (!set.contains(v)) {
            throw DomainError(std::string(slot) + ": fixed policy value outside its action set");
        }
    }
}

}  // namespace

void AimingConfig::validate() const {
    const Eigen::Index n = dyn.n();
    if (x0.size() != n || y0.size() != n) {
        throw DomainError("initial states must have the state dimension " + std::to_string(n));
    }
    if (!x0.allFinite() || !y0.allFinite()) throw DomainError("initial states must be finite");
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    if (std::abs(partition.horizon() - horizon) > 1e-12 * std::max(1.0, horizon)) {
        throw DomainError("partition horizon differs from T");
    }
    if (P.dim() != dyn.n_u()) throw DomainError("P dimension differs from the control dimension");
    if (Q.dim() != dyn.n_v()) throw DomainError("Q dimension differs from the disturbance dimension");
    if (substeps < 1) throw DomainError("substeps must be at least 1");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    if (is_adversarial(system_u) || is_adversarial(guide_v)) {
        throw DomainError("adversarial policy applies to the disturbance and guide control only");
    }
    if (is_extremal(disturbance) || is_extremal(guide_u)) {
        throw DomainError("extremal policy applies to the system control and guide disturbance only");
    }
    const std::size_t cells = partition.cells();
    validate_fixed(system_u, P, cells, "system_u");
    validate_fixed(disturbance, Q, cells, "disturbance");
    validate_fixed(guide_u, P, cells, "guide_u");
    validate_fixed(guide_v, Q, cells, "guide_v");
}

namespace {

// Simulation grid: every partition cell split into `substeps` equal steps.
TimeGrid refine(const TimeGrid& partition, int substeps) {
    if (substeps == 1) return partition;
    if (partition.is_uniform()) {
        return TimeGrid::uniform(partition.horizon(), partition.cells() * static_cast<std::size_t>(substeps));
    }
    std::vector<double> nodes;
    nodes.reserve(partition.cells() * static_cast<std::size_t>(substeps) + 1);
    for (std::size_t j = 0; j < partition.cells(); ++j) {
        const double a = partition[j];
        const double b = partition[j + 1];
        for (int k = 0; k < substeps; ++k) nodes.push_back(a + (b - a) * k / substeps);
    }
    nodes.push_back(partition.horizon());
    return TimeGrid::from_nodes(std::move(nodes));
}

// Best response of one player with the other player's action frozen, over a
// ball (separable only, closed form) or a finite set (lowest index wins).
// sign = +1 maximizes <s, g>, sign = -1 minimizes.
Vector best_response_v(const GameDynamics& dyn, double t, const Vector& state, const Vector& s,
                       const Vector& u, const ActionSet& Q, double sign) {
    if (dyn.is_separable() && Q.is_ball()) {
        const Vector w = dyn.separable().C.transpose() * s;
        const double norm = w.norm();
        if (norm == 0.0) return Vector::Zero(Q.dim());
        return (sign * Q.as_ball().radius / norm) * w;
    }
    if (Q.is_ball()) throw UnsupportedError("adversarial disturbance over a ball needs separable dynamics");
    const auto& pts = Q.as_finite().points;
    std::size_t best = 0;
    double best_val = sign * s.dot(dyn(t, state, u, pts[0]));
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double val = sign * s.dot(dyn(t, state, u, pts[i]));
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    return pts[best];
}

Vector best_response_u(const GameDynamics& dyn, double t, const Vector& state, const Vector& s,
                       const Vector& v, const ActionSet& P, double sign) {
    if (dyn.is_separable() && P.is_ball()) {
        const Vector w = dyn.separable().B.transpose() * s;
        const double norm = w.norm();
        if (norm == 0.0) return Vector::Zero(P.dim());
        return (sign * P.as_ball().radius / norm) * w;
    }
    if (P.is_ball()) throw UnsupportedError("adversarial guide control over a ball needs separable dynamics");
    const auto& pts = P.as_finite().points;
    std::size_t best = 0;
    double best_val = sign * s.dot(dyn(t, state, pts[0], v));
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double val = sign * s.dot(dyn(t, state, pts[i], v));
        if (val > best_val) {
            best_val = val;
            best = i;
        }
    }
    return pts[best];
}

// Per-slot random stream, created only for seeded policies.
std::optional<Rng> make_stream(const ControlPolicy& p, ControlSlot slot) {
    if (const auto* r = std::get_if<SeededRandomPolicy>(&p)) {
        return Rng(stream_seed(r->seed, static_cast<std::uint64_t>(slot)));
    }
    return std::nullopt;
}

const Vector& fixed_value(const ControlPolicy& p, std::size_t cell) {
    const auto& values = std::get<FixedPolicy>(p).values;
    return values.size() == 1 ? values.front() : values[cell];
}

double guarantee_factor(const GameDynamics& dyn, FracOrder alpha, double horizon) {
    try {
        const double a = alpha.value();
        return std::sqrt(mittag_leffler(a, 2.0 * dyn.lambda_g() * std::pow(horizon, a)));
    } catch (const RangeError&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

SimulationResult run_aiming(const AimingConfig& config) {
    config.validate();
    const GameDynamics& dyn = config.dyn;
    const TimeGrid& partition = config.partition;
    const TimeGrid fine = refine(partition, config.substeps);
    const auto sub = static_cast<std::size_t>(config.substeps);
    const ProductRectangleWeights weights(config.alpha, fine);
    const Eigen::Index n = dyn.n();
    const std::size_t cells = partition.cells();

    auto rng_u = make_stream(config.system_u, ControlSlot::SystemU);
    auto rng_v = make_stream(config.disturbance, ControlSlot::SystemV);
    auto rng_ut = make_stream(config.guide_u, ControlSlot::GuideU);
    auto rng_vt = make_stream(config.guide_v, ControlSlot::GuideV);

    Matrix x_fine(n, static_cast<Eigen::Index>(fine.size()));
    Matrix y_fine(n, static_cast<Eigen::Index>(fine.size()));
    Matrix gx(n, static_cast<Eigen::Index>(fine.size()));
    Matrix gy(n, static_cast<Eigen::Index>(fine.size()));
    x_fine.col(0) = config.x0;
    y_fine.col(0) = config.y0;

    std::vector<Vector> u_vals, v_vals, ut_vals, vt_vals;
    u_vals.reserve(cells);
    v_vals.reserve(cells);
    ut_vals.reserve(cells);
    vt_vals.reserve(cells);

    Vector u, v, ut, vt;
    for (std::size_t i = 0; i + 1 < fine.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const double t = fine[i];
        const Vector xi = x_fine.col(col);
        const Vector yi = y_fine.col(col);

        if (i % sub == 0) {
            const std::size_t cell = i / sub;
            const double tau = partition[cell];
            const Vector s = xi - yi;

            if (is_extremal(config.system_u)) u = extremal_u(dyn, tau, xi, s, config.P, config.Q);
            else if (rng_u) u = sample_action(config.P, *rng_u);
            else u = fixed_value(config.system_u, cell);

            if (is_extremal(config.guide_v)) vt = extremal_v(dyn, tau, xi, s, config.P, config.Q);
            else if (rng_vt) vt = sample_action(config.Q, *rng_vt);
            else vt = fixed_value(config.guide_v, cell);

            if (is_adversarial(config.disturbance)) v = best_response_v(dyn, tau, xi, s, u, config.Q, 1.0);
            else if (rng_v) v = sample_action(config.Q, *rng_v);
            else v = fixed_value(config.disturbance, cell);

            if (is_adversarial(config.guide_u)) ut = best_response_u(dyn, tau, yi, s, vt, config.P, -1.0);
            else if (rng_ut) ut = sample_action(config.P, *rng_ut);
            else ut = fixed_value(config.guide_u, cell);

            u_vals.push_back(u);
            v_vals.push_back(v);
            ut_vals.push_back(ut);
            vt_vals.push_back(vt);
        }

        gx.col(col) = dyn(t, xi, u, v);
        gy.col(col) = dyn(t, yi, ut, vt);
        if (!gx.col(col).allFinite() || !gy.col(col).allFinite()) {
            throw NumericError("non-finite dynamics value", i);
        }
        x_fine.col(col + 1) = config.x0 + weights.accumulate(i + 1, gx);
        y_fine.col(col + 1) = config.y0 + weights.accumulate(i + 1, gy);
        if (!x_fine.col(col + 1).allFinite() || !y_fine.col(col + 1).allFinite()) {
            throw NumericError("non-finite state", i + 1);
        }
    }

    Matrix x(n, static_cast<Eigen::Index>(partition.size()));
    Matrix y(n, static_cast<Eigen::Index>(partition.size()));
    double dev_sup = 0.0;
    for (std::size_t j = 0; j < partition.size(); ++j) {
        const auto src = static_cast<Eigen::Index>(j * sub);
        const auto dst = static_cast<Eigen::Index>(j);
        x.col(dst) = x_fine.col(src);
        y.col(dst) = y_fine.col(src);
        dev_sup = std::max(dev_sup, (x.col(dst) - y.col(dst)).norm());
    }

    const double K = guarantee_factor(dyn, config.alpha, config.horizon);
    std::optional<std::uint64_t> seed;
    if (const auto* r = std::get_if<SeededRandomPolicy>(&config.disturbance)) seed = r->seed;
    else if (const auto* r2 = std::get_if<SeededRandomPolicy>(&config.guide_u)) seed = r2->seed;

    return SimulationResult{
        Trajectory(partition, std::move(x)),
        Trajectory(partition, std::move(y)),
        ControlRealization(partition, std::move(u_vals)),
        ControlRealization(partition, std::move(v_vals)),
        ControlRealization(partition, std::move(ut_vals)),
        ControlRealization(partition, std::move(vt_vals)),
        dev_sup,
        config.eps + K * (config.x0 - config.y0).norm(),
        K,
        seed,
    };
}

TheoremConstants theorem_constants(const GameDynamics& dyn, FracOrder alpha, double horizon,
                                   double R0, double eps, std::optional<double> holder) {
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    if (!(horizon > 0.0)) throw DomainError("horizon must be positive");
    const double a = alpha.value();
    const double t_alpha = std::pow(horizon, a);
    const double lambda_g = dyn.lambda_g();
    const double c_g = dyn.c_g();
    const double e = mittag_leffler(a, 2.0 * lambda_g * t_alpha);

    TheoremConstants out{};
    out.K = std::sqrt(e);
    out.eta = gamma_fn(a + 1.0) * eps * eps / (2.0 * t_alpha * e);

    const AprioriBounds bounds = apriori_bounds(R0, c_g, alpha, horizon);
    out.R_bar = bounds.R;
    out.H_bar = holder.value_or(bounds.H);
    if (!(out.H_bar > 0.0)) throw DomainError("Hoelder constant must be positive");

    const double rhs = std::min(out.eta / (8.0 * out.H_bar * (1.0 + out.R_bar) * c_g),
                                out.eta / (16.0 * out.R_bar * lambda_g * out.H_bar));
    out.delta2 = std::pow(rhs, 1.0 / a);

    if (const auto L = dyn.time_lipschitz()) {
        out.delta1 = *L > 0.0 ? out.eta / (16.0 * out.R_bar * *L)
                              : std::numeric_limits<double>::infinity();
        out.delta = std::min(*out.delta1, out.delta2);
    } else {
        out.delta = out.delta2;
    }
    return out;
}

std::vector<DiameterPoint> deviation_vs_diameter(const AimingConfig& config,
                                                 std::span<const double> diameters) {
    for (std::size_t i = 0; i < diameters.size(); ++i) {
        if (!(diameters[i] > 0.0)) throw DomainError("diameters must be positive");
        if (i > 0 && diameters[i] > diameters[i - 1]) {
            throw DomainError("diameters must be sorted descending");
        }
    }
    auto per_cell = [](const ControlPolicy& p) {
        const auto* f = std::get_if<FixedPolicy>(&p);
        return f && f->values.size() != 1;
    };
    if (per_cell(config.system_u) || per_cell(config.disturbance) || per_cell(config.guide_u) ||
        per_cell(config.guide_v)) {
        throw DomainError("per-cell fixed policies cannot be transferred across partitions");
    }

    std::vector<std::future<DiameterPoint>> jobs;
    jobs.reserve(diameters.size());
    for (const double d : diameters) {
        jobs.push_back(std::async(std::launch::async, [&config, d] {
            AimingConfig run = config;
            const auto cells =
                static_cast<std::size_t>(std::max(1.0, std::ceil(config.horizon / d - 1e-9)));
            run.partition = TimeGrid::uniform(config.horizon, cells);
            const SimulationResult r = run_aiming(run);
            return DiameterPoint{d, r.deviation_sup, (r.x.at(r.x.size() - 1) - r.y.at(r.y.size() - 1)).norm()};
        }));
    }
    std::vector<DiameterPoint> out;
    out.reserve(jobs.size());
    for (auto& job : jobs) out.push_back(job.get());
    return out;
}

Trajectory deviation(const SimulationResult& result) {
    return Trajectory(result.x.grid(), result.x.values() - result.y.values());
}

InequalityReport verify_deviation_inequality(const SimulationResult& result, FracOrder alpha,
                                             double tol) {
    return check_deviation_inequality(deviation(result), alpha, tol);
}

}  // namespace fracguide
