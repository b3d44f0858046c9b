#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sppde::cli {

/// Thrown by parse_config when -h/--help is requested; the caller prints
/// usage and exits 0.
struct HelpRequested {
    std::string text;
};

struct RunConfig {
    enum class Command { Solve, Sweep, Mms, Audit, MeshDump };

    Command command = Command::Solve;
    std::string example = "example1";
    std::vector<double> eps; ///< empty = example default
    std::vector<double> mu;  ///< empty = example default
    std::vector<int> n;
    std::optional<int> m; ///< defaulted to N for single-run commands
    std::optional<double> rho;
    std::string out;
    int jobs = 0; ///< 0 = logical CPU count
    bool strict_audit = false;
};

/// Accepts plain decimals and exact binary powers written as "2^-16".
double parse_number(const std::string& token);

/// argv-style parse; an optional flat key=value file named by --config
/// supplies defaults that explicit flags override. Unknown keys and malformed
/// values raise ConfigError.
RunConfig parse_config(const std::vector<std::string>& args);
RunConfig parse_config(int argc, const char* const* argv);

/// Executes the command, writing its artifacts; returns the process exit code.
int run(const RunConfig& config);

std::string usage();

} // namespace sppde::cli
