#include "fracguide/cli.hpp"

#include "fracguide/aiming.hpp"
#include "fracguide/error.hpp"
#include "fracguide/lyapunov_check.hpp"
#include "fracguide/scenario.hpp"
#include "fracguide/trajectory_csv.hpp"
#include "number_format.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fracguide {

using detail::format_shortest;
using detail::parse_double;

namespace {

struct ScenarioSource {
    std::string file;
    std::string builtin;
    std::optional<std::uint64_t> seed;
    std::optional<double> step;
    std::string x0;
    std::string y0;
    std::optional<int> substeps;
    std::optional<double> eps;

    void attach(CLI::App* cmd) {
        cmd->add_option("scenario", file, "Scenario file");
        cmd->add_option("--builtin", builtin, "Built-in scenario")->check(CLI::IsMember({"paper"}));
        cmd->add_option("--seed", seed, "Seed of every random policy");
        cmd->add_option("--step", step, "Uniform partition step (overrides the scenario)");
        cmd->add_option("--x0", x0, "System initial state, comma separated");
        cmd->add_option("--y0", y0, "Guide initial state, comma separated");
        cmd->add_option("--substeps", substeps, "Euler steps per partition cell");
        cmd->add_option("--eps", eps, "epsilon of the reported bound");
    }

    [[nodiscard]] Scenario load() const {
        if (file.empty() == builtin.empty()) {
            throw ParseError(0, "give exactly one of a scenario file or --builtin paper");
        }
        Scenario s = builtin.empty() ? load_scenario(file) : paper_scenario();
        if (seed) s.reseed(*seed);
        if (step) {
            s.step = *step;
            s.nodes.clear();
        }
        if (!x0.empty()) s.x0 = parse_vector(x0, "--x0");
        if (!y0.empty()) s.y0 = parse_vector(y0, "--y0");
        if (substeps) s.substeps = *substeps;
        if (eps) s.eps = *eps;
        return s;
    }

    static Vector parse_vector(const std::string& text, const char* flag) {
        std::vector<double> vals;
        std::stringstream ss(text);
        for (std::string tok; std::getline(ss, tok, ',');) {
            const auto v = parse_double(tok);
            if (!v) throw ParseError(0, std::string(flag) + ": not a number '" + tok + "'");
            vals.push_back(*v);
        }
        return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    }
};

// Scenario overrides can make the config inconsistent; report those as input errors.
AimingConfig build_config(const Scenario& s) {
    try {
        return s.build();
    } catch (const DomainError& e) {
        throw ParseError(0, e.what());
    }
}

std::string join_vector(const Vector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_shortest(v[i]);
    }
    return out;
}

int cmd_simulate(const ScenarioSource& src, std::string out_path, std::string meta_path,
                 std::ostream& out, std::ostream& err) {
    const Scenario scenario = src.load();
    const AimingConfig config = build_config(scenario);
    if (out_path.empty()) out_path = scenario.csv_path.empty() ? "trajectory.csv" : scenario.csv_path;
    if (meta_path.empty()) meta_path = scenario.meta_path.empty() ? out_path + ".meta" : scenario.meta_path;

    const SimulationResult result = run_aiming(config);
    write_trajectory_csv(out_path, result);

    const bool uniform = result.x.grid().is_uniform();
    std::optional<InequalityReport> lyap;
    if (uniform) {
        lyap = verify_deviation_inequality(result, config.alpha,
                                           l1_tolerance(config.alpha, result.x.grid().step()));
    }
    const bool members = result.u.within(config.P) && result.v.within(config.Q) &&
                         result.u_tilde.within(config.P) && result.v_tilde.within(config.Q);

    Metadata meta;
    meta["alpha"] = format_shortest(config.alpha.value());
    meta["horizon"] = format_shortest(config.horizon);
    meta["nodes"] = std::to_string(config.partition.size());
    meta["diameter"] = format_shortest(config.partition.diameter());
    meta["x0"] = join_vector(config.x0);
    meta["y0"] = join_vector(config.y0);
    meta["seed"] = result.seed ? std::to_string(*result.seed) : "none";
    meta["deviation_sup"] = format_shortest(result.deviation_sup);
    meta["K"] = format_shortest(result.K);
    meta["eps"] = format_shortest(config.eps);
    meta["bound_rhs"] = format_shortest(result.bound_rhs);
    meta["controls_in_sets"] = members ? "true" : "false";
    meta["csv"] = out_path;
    if (lyap) {
        meta["lyapunov_max_violation"] = format_shortest(lyap->max_violation);
        meta["lyapunov_tolerance"] = format_shortest(lyap->tolerance_used);
    }
    write_metadata(meta_path, meta);

    out << "wrote " << out_path << " (" << config.partition.size() << " rows) and " << meta_path << "\n";
    out << "deviation_sup = " << format_shortest(result.deviation_sup) << "\n";
    out << "K = " << format_shortest(result.K) << "\n";
    out << "bound_rhs = " << format_shortest(result.bound_rhs) << "\n";

    if (!members) {
        err << "error: a control realization left its action set\n";
        return kExitViolation;
    }
    if (lyap && lyap->violated()) {
        err << "error: deviation inequality violated by " << format_shortest(lyap->max_violation)
            << " (tolerance " << format_shortest(lyap->tolerance_used) << ")\n";
        return kExitViolation;
    }
    return kExitOk;
}

int cmd_sweep(const ScenarioSource& src, const std::vector<double>& diameters, const std::string& out_path,
              std::ostream& out) {
    const AimingConfig config = build_config(src.load());
    std::vector<double> sorted = diameters;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const auto points = deviation_vs_diameter(config, sorted);

    std::string table = "delta,deviation_sup,deviation_final\n";
    for (const auto& p : points) {
        table += format_shortest(p.delta) + "," + format_shortest(p.deviation_sup) + "," + format_shortest(p.deviation_final) + "\n";
    }
    out << table;
    if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot write '" + out_path + "'");
        f << table;
    }
    return kExitOk;
}

int cmd_check_lyapunov(const std::string& csv_path, std::optional<double> alpha_opt,
                       std::optional<double> tol_opt, std::ostream& out, std::ostream& err) {
    const TrajectoryTable table = read_trajectory_csv(csv_path);
    double alpha_value = 0.5;
    if (alpha_opt) {
        alpha_value = *alpha_opt;
    } else if (std::filesystem::exists(csv_path + ".meta")) {
        const Metadata meta = read_metadata(csv_path + ".meta");
        if (const auto it = meta.find("alpha"); it != meta.end()) {
            const auto v = parse_double(it->second);
            if (!v) throw ParseError(0, "metadata alpha is not a number");
            alpha_value = *v;
        }
    }
    const FracOrder alpha = [&] {
        try {
            return FracOrder(alpha_value);
        } catch (const DomainError& e) {
            throw ParseError(0, e.what());
        }
    }();
    if (!table.grid.is_uniform()) throw ParseError(0, "check-lyapunov needs a uniform time column");
    const double tol = tol_opt.value_or(l1_tolerance(alpha, table.grid.step()));

    const Trajectory s(table.grid, table.x.values() - table.y.values());
    const InequalityReport report = check_deviation_inequality(s, alpha, tol);
    out << "alpha = " << format_shortest(alpha.value()) << "\n";
    out << "nodes = " << table.grid.size() << "\n";
    out << "max_violation = " << format_shortest(report.max_violation) << "\n";
    out << "tolerance = " << format_shortest(report.tolerance_used) << "\n";
    if (report.violated()) {
        err << "error: (D^a nu) <= 2<s, D^a s> violated beyond tolerance\n";
        return kExitViolation;
    }
    out << "ok\n";
    return kExitOk;
}

int cmd_constants(const ScenarioSource& src, std::optional<double> R0_opt, std::optional<double> holder,
                  std::ostream& out) {
    const AimingConfig config = build_config(src.load());
    const double eps = config.eps;
    const double R0 = R0_opt.value_or(std::max(config.x0.norm(), config.y0.norm()));
    if (!(R0 > 0.0)) throw ParseError(0, "R0 must be positive; pass --R0");
    const TheoremConstants c = theorem_constants(config.dyn, config.alpha, config.horizon, R0, eps, holder);
    out << "eps = " << format_shortest(eps) << "\n";
    out << "R0 = " << format_shortest(R0) << "\n";
    out << "K = " << format_shortest(c.K) << "\n";
    out << "eta = " << format_shortest(c.eta) << "\n";
    out << "R_bar = " << format_shortest(c.R_bar) << "\n";
    out << "H_bar = " << format_shortest(c.H_bar) << "\n";
    out << "delta1 = " << (c.delta1 ? format_shortest(*c.delta1) : std::string("undeclared")) << "\n";
    out << "delta2 = " << format_shortest(c.delta2) << "\n";
    out << "delta = " << format_shortest(c.delta) << "\n";
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional-order conflict-controlled systems: guide aiming simulator"};
    app.require_subcommand(1);

    ScenarioSource sim_src;
    std::string sim_out;
    std::string sim_meta;
    auto* simulate = app.add_subcommand("simulate", "Run the aiming procedure and export CSV + metadata");
    sim_src.attach(simulate);
    simulate->add_option("--out", sim_out, "Trajectory CSV path");
    simulate->add_option("--meta", sim_meta, "Metadata path (default <out>.meta)");

    ScenarioSource sweep_src;
    std::vector<double> diameters;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "Deviation against partition diameter");
    sweep_src.attach(sweep);
    sweep->add_option("--diameters", diameters, "Partition diameters")->delimiter(',')->required();
    sweep->add_option("--out", sweep_out, "Table path");

    std::string csv_path;
    std::optional<double> check_alpha;
    std::optional<double> check_tol;
    auto* check = app.add_subcommand("check-lyapunov", "Re-verify the quadratic inequality on a stored run");
    check->add_option("csv", csv_path, "Trajectory CSV")->required();
    check->add_option("--alpha", check_alpha, "Fractional order (default: from <csv>.meta, else 0.5)");
    check->add_option("--tol", check_tol, "Tolerance (default C h^(1-alpha))");

    ScenarioSource const_src;
    std::optional<double> const_R0;
    std::optional<double> const_holder;
    auto* constants = app.add_subcommand("constants", "Constants K, eta, delta of the proximity guarantee");
    const_src.attach(constants);
    constants->add_option("--R0", const_R0, "Initial ball radius (default max(|x0|, |y0|))");
    constants->add_option("--holder", const_holder, "Hoelder constant to use instead of the a-priori one");

    auto* selftest = app.add_subcommand("selftest", "Analytic oracle battery");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    }

    try {
        if (*simulate) return cmd_simulate(sim_src, sim_out, sim_meta, out, err);
        if (*sweep) return cmd_sweep(sweep_src, diameters, sweep_out, out);
        if (*check) return cmd_check_lyapunov(csv_path, check_alpha, check_tol, out, err);
        if (*constants) return cmd_constants(const_src, const_R0, const_holder, out);
        if (*selftest) return run_selftest(out) ? kExitOk : kExitViolation;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const RangeError& e) {
        err << "range error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace fracguide
