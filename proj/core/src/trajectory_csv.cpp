#include "fracguide/trajectory_csv.hpp"

#include "fracguide/error.hpp"
#include "number_format.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fracguide {

using detail::format_significant;
using detail::parse_double;

namespace {

void append_header(std::string& out, const char* name, Eigen::Index count) {
    for (Eigen::Index i = 1; i <= count; ++i) {
        out += ',';
        out += name;
        out += std::to_string(i);
    }
}

void append_values(std::string& out, const Vector& v, std::vector<double>* parsed = nullptr) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const std::string text = format_significant(v[i], kCsvSignificantDigits);
        out += ',';
        out += text;
        if (parsed) parsed->push_back(*parse_double(text));
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace

std::string trajectory_csv(const SimulationResult& r) {
    const Eigen::Index n = r.x.dim();
    const Eigen::Index n_u = r.u.values.front().size();
    const Eigen::Index n_v = r.v.values.front().size();

    std::string out = "t";
    append_header(out, "x_", n);
    append_header(out, "y_", n);
    append_header(out, "u_", n_u);
    append_header(out, "v_", n_v);
    append_header(out, "u_tilde_", n_u);
    append_header(out, "v_tilde_", n_v);
    out += ",dev\n";

    const TimeGrid& grid = r.x.grid();
    const std::size_t cells = grid.cells();
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t m = 0; m < grid.size(); ++m) {
        const std::size_t cell = std::min(m, cells - 1);
        out += format_significant(grid[m], kCsvSignificantDigits);
        xs.clear();
        ys.clear();
        append_values(out, r.x.at(m), &xs);
        append_values(out, r.y.at(m), &ys);
        append_values(out, r.u.values[cell]);
        append_values(out, r.v.values[cell]);
        append_values(out, r.u_tilde.values[cell]);
        append_values(out, r.v_tilde.values[cell]);
        double sq = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) sq += (xs[i] - ys[i]) * (xs[i] - ys[i]);
        out += ',';
        out += format_significant(std::sqrt(sq), kCsvSignificantDigits);
        out += '\n';
    }
    return out;
}

void write_trajectory_csv(const std::string& path, const SimulationResult& result) {
    write_file(path, trajectory_csv(result));
}

TrajectoryTable parse_trajectory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 1;
    if (!std::getline(in, line)) throw ParseError(1, "empty trajectory CSV");

    std::vector<std::string> header;
    {
        std::stringstream hs(line);
        for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
    }
    if (header.empty() || header.front() != "t" || header.back() != "dev") {
        throw ParseError(1, "header must start with 't' and end with 'dev'");
    }
    Eigen::Index n = 0;
    while (static_cast<std::size_t>(n) + 1 < header.size() && header[static_cast<std::size_t>(n) + 1] == "x_" + std::to_string(n + 1)) ++n;
    if (n == 0) throw ParseError(1, "no x_ columns in header");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (header[static_cast<std::size_t>(1 + n + i)] != "y_" + std::to_string(i + 1)) {
            throw ParseError(1, "expected y_ columns after x_ columns");
        }
    }

    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) {
            const auto v = parse_double(cell);
            if (!v) throw ParseError(line_no, "not a number: '" + cell + "'");
            row.push_back(*v);
        }
        if (row.size() != header.size()) {
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " columns, got " +
                                          std::to_string(row.size()));
        }
        times.push_back(row.front());
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw ParseError(line_no, "trajectory needs at least two rows");

    TimeGrid grid = [&] {
        try {
            return TimeGrid::from_nodes(times);
        } catch (const DomainError& err) {
            throw ParseError(line_no, err.what());
        }
    }();
    const auto cols = static_cast<Eigen::Index>(rows.size());
    Matrix x(n, cols);
    Matrix y(n, cols);
    std::vector<double> dev;
    for (Eigen::Index m = 0; m < cols; ++m) {
        const auto& row = rows[static_cast<std::size_t>(m)];
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i, m) = row[static_cast<std::size_t>(1 + i)];
            y(i, m) = row[static_cast<std::size_t>(1 + n + i)];
        }
        dev.push_back(row.back());
    }
    return TrajectoryTable{std::move(header), grid, Trajectory(grid, std::move(x)),
                           Trajectory(grid, std::move(y)), std::move(dev)};
}

TrajectoryTable read_trajectory_csv(const std::string& path) {
    return parse_trajectory_csv(read_file(path));
}

std::string format_metadata(const Metadata& meta) {
    std::string out;
    for (const auto& [k, v] : meta) out += k + " = " + v + "\n";
    return out;
}

void write_metadata(const std::string& path, const Metadata& meta) {
    write_file(path, format_metadata(meta));
}

Metadata read_metadata(const std::string& path) {
    std::istringstream in(read_file(path));
    Metadata meta;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (line.empty()) continue;
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        meta[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return meta;
}

}  // namespace fracguide
