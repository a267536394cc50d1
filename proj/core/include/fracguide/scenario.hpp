#pragma once

// Scenario files: a versioned, sectioned key = value text format that
// describes one aiming experiment.
//
//   fracguide-scenario v1
//   [dynamics]
//   kind = separable_affine        # or: builtin = paper
//   dim = 2
//   drift_1 = x2
//   drift_2 = -sin(x1) + cos(t)
//   B = 0.3 0; 0 0.5               # rows separated by ';'
//   C = 0.4 0; 0 0.2
//   lambda_g = 1
//   c_g = 1.9
//   time_lipschitz = 1             # optional
//   [order]
//   alpha = 0.5
//   [horizon]
//   T = 5
//   [sets]
//   P = ball 1 2                   # radius, dimension
//   Q = finite 1 0; 0 1            # points separated by ';'
//   [initial]
//   x0 = -1 0
//   y0 = 0 1
//   [partition]
//   step = 0.0005                  # or: nodes = 0 0.5 1 ...
//   substeps = 1                   # optional
//   [policies]
//   disturbance = random 42        # random <seed> | fixed <rows> | adversarial
//   guide_u = random 42
//   system_u = extremal            # optional; extremal | random <seed> | fixed <rows>
//   guide_v = extremal             # optional
//   eps = 0.1                      # optional
//   [output]
//   csv = trajectory.csv           # optional
//   meta = trajectory.csv.meta     # optional
//
// '#' starts a comment. Every syntax or consistency error is reported as a
// ParseError carrying the offending line.

#include "fracguide/aiming.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fracguide {

inline constexpr const char* kScenarioHeader = "fracguide-scenario v1";

struct SetSpec {
    bool ball = true;
    double radius = 1.0;
    int dim = 1;
    std::vector<Vector> points;

    [[nodiscard]] ActionSet build() const;
    friend bool operator==(const SetSpec& a, const SetSpec& b);
};

/// Plain-data description of an aiming experiment (no callables), so it can
/// be compared, written and re-read.
struct Scenario {
    int dim = 0;
    std::vector<std::string> drift;  // one expression per state component
    Matrix B;
    Matrix C;
    double lambda_g = 0.0;
    double c_g = 0.0;
    std::optional<double> time_lipschitz;

    double alpha = 0.5;
    double horizon = 1.0;
    SetSpec P;
    SetSpec Q;
    Vector x0;
    Vector y0;

    std::optional<double> step;  // uniform partition step, or
    std::vector<double> nodes;   // explicit partition nodes
    int substeps = 1;

    ControlPolicy disturbance = SeededRandomPolicy{0};
    ControlPolicy guide_u = SeededRandomPolicy{0};
    ControlPolicy system_u = ExtremalPolicy{};
    ControlPolicy guide_v = ExtremalPolicy{};
    double eps = 0.1;

    std::string csv_path;
    std::string meta_path;

    /// Partition described by step or nodes.
    [[nodiscard]] TimeGrid partition() const;

    /// Compiles drift expressions and assembles a validated AimingConfig.
    [[nodiscard]] AimingConfig build() const;

    /// Sets the seed of every random policy.
    void reseed(std::uint64_t seed);

    friend bool operator==(const Scenario& a, const Scenario& b);
};

/// The two-dimensional example: alpha = 0.5, T = 5,
/// drift (x2, -sin(x1) + cos(t)), B = diag(0.3, 0.5), C = diag(0.4, 0.2),
/// P = Q = unit disc, x0 = (-1, 0), y0 = (0, 1), step 0.0005, random v and u~.
/// lambda_g = 1 (the drift Jacobian has norm <= 1), c_g = 1.9 (|drift| <= |x|,
/// plus |cos t| + 0.5 + 0.4), time Lipschitz constant 1.
[[nodiscard]] Scenario paper_scenario(std::uint64_t seed = 42);

/// paper_scenario().build()
[[nodiscard]] AimingConfig scenario_paper_example();

[[nodiscard]] Scenario parse_scenario(const std::string& text);
[[nodiscard]] Scenario load_scenario(const std::string& path);
[[nodiscard]] std::string write_scenario(const Scenario& scenario);

}  // namespace fracguide
