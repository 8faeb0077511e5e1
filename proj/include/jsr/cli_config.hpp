#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace jsr {

/// Fully validated description of one CLI run.
///
/// `sweep` treats m/K/N as one-cell-per-combination grids so a single flag
/// such as `--m 31,33,35` sweeps that parameter; `solve` and `hist` require
/// exactly one value each; `phase` builds its grid from the *-min/max/step
/// flags instead.
struct RunConfig {
    std::string command;  // solve | sweep | phase | hist

    int n = 100;
    std::vector<int> m_values;
    std::vector<int> k_values;
    std::vector<int> n_samples{20};  // N
    std::optional<double> snr_db;
    int trials = 200;
    std::uint64_t master_seed = 0;
    std::vector<std::string> algorithms{"ss_music"};
    std::optional<double> epsilon_rel;
    int t_max = 100;
    std::string out_dir = "results";
    bool emit_svg = false;
    int threads = 0;
    bool record_walltime = false;

    // phase-transition grid
    int m_min = 5;
    int m_max = 50;
    int m_step = 5;
    int k_min = 5;
    int k_max = 50;
    int k_step = 5;
};

/// Thrown when --help is requested; carries the help text to print.
struct HelpRequested {
    std::string text;
};

/// Parses command-line words (program name excluded) plus an optional
/// --config key=value file; flags override file values override defaults.
/// Throws ConfigError on unknown keys, malformed values, or out-of-range
/// settings, and HelpRequested for --help.
RunConfig parse_config(const std::vector<std::string>& args);

/// Runs the validated command: writes CSV/JSON (and SVG when requested)
/// into the output directory and prints one summary line per (spec,
/// algorithm). Returns 0; failures surface as exceptions.
int execute(const RunConfig& config);

/// parse_config + execute with exit-code mapping:
/// 0 success, 2 configuration error, 3 runtime error.
int cli_main(const std::vector<std::string>& args);

}  // namespace jsr
