#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "plapcert/report.hpp"

namespace plapcert {

enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 1,
    kExitValidationFailed = 2,
    kExitInconclusive = 3,
    kExitNoSolution = 4,
};

/// Malformed command-line input (ladder syntax, flag values, unreadable files).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CliOptions {
    std::string command;
    std::optional<std::string> config_path;
    bool paper_example = false;
    std::vector<std::string> ladder;
    std::optional<std::size_t> n;
    std::optional<double> tol;  ///< solver convergence tolerance
    std::optional<std::string> out;
    bool json = false;
    std::optional<std::size_t> resolution;  ///< growth-bound lattice points per axis
    std::optional<double> cap;              ///< nonexistence sampling cap
    std::optional<double> damping;
    std::optional<std::size_t> max_iterations;
    std::vector<std::string> amplitudes;  ///< "a1,a2" pairs
};

struct CommandResult {
    int exit_code = kExitOk;
    Json report;  ///< rounded, schema_version "1"
    std::string text;
    std::vector<std::string> warnings;
    std::vector<std::string> files;  ///< CSV files written by solve
};

/// "rho1,rho2:TAG" with TAG in {I1, I0, I0star}.
LadderRung parse_rung(const std::string& token);
std::vector<LadderRung> parse_ladder(const std::vector<std::string>& tokens);

CommandResult cmd_validate(const CliOptions& options);
CommandResult cmd_constants(const CliOptions& options);
CommandResult cmd_certify(const CliOptions& options);
CommandResult cmd_solve(const CliOptions& options);

/// Dispatches on options.command, prints text or JSON to out, writes the
/// report to --out, and maps errors to exit codes.
int run_command(const CliOptions& options, std::ostream& out, std::ostream& err);

}  // namespace plapcert
