#pragma once

// Command-line front end, usable in-process (tests call run_cli directly).
//
//   fracguide simulate <scenario-file> | --builtin paper  [--seed N] [--out F] [--meta F]
//   fracguide sweep --diameters d1,d2,...  <scenario-file> | --builtin paper  [--out F]
//   fracguide check-lyapunov <trajectory-csv> [--alpha a] [--tol t]
//   fracguide constants <scenario-file> | --builtin paper  [--eps e] [--R0 r]
//   fracguide selftest

#include <iosfwd>
#include <string>
#include <vector>

namespace fracguide {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,     // I/O and other unexpected errors
    kExitParse = 2,       // malformed command line, scenario or CSV
    kExitNumeric = 3,     // non-finite state, Mittag-Leffler envelope, unsupported selector
    kExitViolation = 4,   // an invariant or inequality check failed
};

/// `args` excludes the program name.
[[nodiscard]] int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Analytic-oracle battery; prints one PASS/FAIL line per check.
[[nodiscard]] bool run_selftest(std::ostream& out);

}  // namespace fracguide
