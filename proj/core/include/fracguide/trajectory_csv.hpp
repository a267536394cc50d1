#pragma once

// CSV export of a simulation run and the flat key = value metadata summary.
//
// Header: t,x_1..x_n,y_1..y_n,u_1..,v_1..,u_tilde_1..,v_tilde_1..,dev
// One row per partition node, 12 significant digits, '.' as decimal
// separator regardless of locale. Controls are piecewise constant on
// [t_j, t_{j+1}); the last row repeats the last cell's controls. dev is
// |x - y| computed from the printed x and y columns.

#include "fracguide/aiming.hpp"

#include <map>
#include <string>
#include <vector>

namespace fracguide {

inline constexpr int kCsvSignificantDigits = 12;

[[nodiscard]] std::string trajectory_csv(const SimulationResult& result);

void write_trajectory_csv(const std::string& path, const SimulationResult& result);

/// Columns of a TrajectoryCsv read back from disk.
struct TrajectoryTable {
    std::vector<std::string> header;
    TimeGrid grid;
    Trajectory x;
    Trajectory y;
    std::vector<double> dev;
};

/// Parses CSV text produced by trajectory_csv. Throws ParseError.
[[nodiscard]] TrajectoryTable parse_trajectory_csv(const std::string& text);
[[nodiscard]] TrajectoryTable read_trajectory_csv(const std::string& path);

using Metadata = std::map<std::string, std::string>;

/// "key = value" lines in key order.
[[nodiscard]] std::string format_metadata(const Metadata& meta);
void write_metadata(const std::string& path, const Metadata& meta);
[[nodiscard]] Metadata read_metadata(const std::string& path);

}  // namespace fracguide
