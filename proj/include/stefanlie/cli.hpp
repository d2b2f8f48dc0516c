#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stefanlie::cli {

enum ExitCode : int { ok = 0, not_converged = 1, config_error = 2 };

struct RunConfig {
    std::string command;                   // solve-tw | solve-ss | check | verify-fd | reproduce-paper
    std::filesystem::path material;        // empty: built-in aluminium constants
    std::vector<std::pair<std::string, double>> overrides;  // material field = value
    std::optional<double> q0;              // pulse power W/m^2, or the rod flux amplitude for `check rod`
    std::filesystem::path out_dir;         // empty: $STEFANLIE_OUT, then ./stefanlie-out

    // check
    std::string scenario;                  // rod | stefan | table2-case-N
    double k = 1.0;
    double gamma = 0.0;
    std::string stefan_form = "steady";    // steady | inverse-sqrt | explicit-time

    // solve-ss
    double ss_tolerance = 1e-8;
    double tail_widths = 10.0;

    // verify-fd
    std::string oracle = "tw";             // tw | ss
    std::vector<int> grids{20, 40, 80};
    double cfl = 0.4;
    double travel = 10.0;                  // tw run length in liquid thicknesses
    double t0 = 1e-3;                      // ss start time, s
    double t_end = 3e-3;                   // ss end time, s
    double snapshot_interval = 0.0;        // s; 0 disables snapshots

    // Canonical text of every field; hashed into artifact headers.
    std::string canonical() const;
};

// Parses argv (CLI11). Returns the config, or an exit code when parsing
// ended the run (help, or a usage error reported to err).
struct Parsed {
    std::optional<RunConfig> config;
    int exit_code = ok;
};
Parsed parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Executes the pipeline. Diagnostics go to err, short summaries to out.
// Config errors return 2 before any artifact is written; solver failures 1.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main(int argc, const char* const* argv);

}  // namespace stefanlie::cli
