#include "jsr/cli_config.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jsr/errors.hpp"
#include "jsr/harness.hpp"
#include "jsr/svg.hpp"

namespace jsr {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<std::string>& values, char sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += values[i];
    }
    return out;
}

std::string join_int(const std::vector<int>& values, char sep) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(values[i]);
    }
    return out;
}

void validate(RunConfig& config) {
    static const std::set<std::string> commands = {"solve", "sweep", "phase", "hist"};
    if (!commands.count(config.command)) {
        throw ConfigError("unknown command: " + config.command +
                          " (expected solve, sweep, phase or hist)");
    }
    if (config.algorithms.empty()) config.algorithms = {"ss_music"};
    for (const auto& name : config.algorithms) {
        if (!algorithm_known(name)) {
            throw ConfigError("unknown algorithm in --algo: " + name);
        }
    }
    if (config.n < 2) throw ConfigError("--n must be at least 2");
    if (config.trials < 1) throw ConfigError("--trials must be at least 1");
    if (config.t_max < 1) throw ConfigError("--t-max must be at least 1");
    if (config.threads < 0) throw ConfigError("--threads must be nonnegative");
    if (config.epsilon_rel && *config.epsilon_rel < 0.0) {
        throw ConfigError("--epsilon must be nonnegative");
    }
    for (int samples : config.n_samples) {
        if (samples < 1) throw ConfigError("--N values must be at least 1");
    }

    if (config.command == "phase") {
        if (config.algorithms.size() != 1) {
            throw ConfigError("phase runs exactly one algorithm; pass a single --algo");
        }
        if (config.n_samples.size() != 1) {
            throw ConfigError("phase takes a single --N value");
        }
        if (config.m_min < 1 || config.k_min < 1 || config.m_step < 1 || config.k_step < 1 ||
            config.m_min > config.m_max || config.k_min > config.k_max) {
            throw ConfigError("phase grid flags must satisfy 1 <= min <= max and step >= 1");
        }
        return;
    }

    if (config.m_values.empty()) {
        throw ConfigError("--m is required for " + config.command);
    }
    if (config.k_values.empty()) {
        throw ConfigError("--K is required for " + config.command);
    }
    if (config.command != "sweep") {
        if (config.m_values.size() != 1 || config.k_values.size() != 1 ||
            config.n_samples.size() != 1) {
            throw ConfigError(config.command + " takes exactly one value each of --m/--K/--N");
        }
    } else {
        const int varying = (config.m_values.size() > 1 ? 1 : 0) +
                            (config.k_values.size() > 1 ? 1 : 0) +
                            (config.n_samples.size() > 1 ? 1 : 0);
        if (varying > 1) {
            throw ConfigError("sweep varies at most one of --m/--K/--N at a time");
        }
    }
    for (int k : config.k_values) {
        if (k < 1 || k >= config.n) {
            throw ConfigError("--K values must satisfy 1 <= K < n");
        }
        for (int m : config.m_values) {
            if (m <= k) {
                throw ConfigError("infeasible cell: --m " + std::to_string(m) +
                                  " must exceed --K " + std::to_string(k));
            }
        }
    }
}

ConfigLines resolved_config(const RunConfig& config) {
    ConfigLines lines;
    lines.emplace_back("command", config.command);
    lines.emplace_back("n", std::to_string(config.n));
    if (config.command == "phase") {
        lines.emplace_back("m_grid", std::to_string(config.m_min) + ":" +
                                         std::to_string(config.m_max) + ":" +
                                         std::to_string(config.m_step));
        lines.emplace_back("K_grid", std::to_string(config.k_min) + ":" +
                                         std::to_string(config.k_max) + ":" +
                                         std::to_string(config.k_step));
    } else {
        lines.emplace_back("m", join_int(config.m_values, ','));
        lines.emplace_back("K", join_int(config.k_values, ','));
    }
    lines.emplace_back("N", join_int(config.n_samples, ','));
    lines.emplace_back("snr_db", config.snr_db ? format_double(*config.snr_db) : "none");
    lines.emplace_back("trials",
                       std::to_string(config.command == "solve" ? 1 : config.trials));
    lines.emplace_back("seed", std::to_string(config.master_seed));
    lines.emplace_back("algo", join(config.algorithms, ','));
    lines.emplace_back("epsilon",
                       config.epsilon_rel ? format_double(*config.epsilon_rel) : "default");
    lines.emplace_back("t_max", std::to_string(config.t_max));
    lines.emplace_back("threads", std::to_string(config.threads));
    lines.emplace_back("emit_svg", config.emit_svg ? "true" : "false");
    lines.emplace_back("walltime", config.record_walltime ? "true" : "false");
    return lines;
}

std::string spec_summary(const EnsembleSpec& spec) {
    std::ostringstream out;
    out << "n=" << spec.n << " m=" << spec.m << " K=" << spec.K << " N=" << spec.N
        << " snr=" << (spec.snr_db ? format_double(*spec.snr_db) : "-");
    return out.str();
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open output file for writing: " + path.string());
    }
    return out;
}

std::vector<int> grid_range(int lo, int hi, int step) {
    std::vector<int> values;
    for (int v = lo; v <= hi; v += step) values.push_back(v);
    return values;
}

void emit_sweep_svg(const RunConfig& config, const std::vector<SweepResult>& results,
                    const std::filesystem::path& path) {
    // Chart over whichever of m/K/N varies (m when the grid is a single cell).
    std::string axis = "m";
    std::vector<double> x;
    if (config.k_values.size() > 1) {
        axis = "K";
        for (const auto& r : results) x.push_back(r.spec.K);
    } else if (config.n_samples.size() > 1) {
        axis = "N";
        for (const auto& r : results) x.push_back(r.spec.N);
    } else {
        for (const auto& r : results) x.push_back(r.spec.m);
    }
    std::vector<SvgSeries> series;
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
        SvgSeries s;
        s.name = config.algorithms[a];
        for (const auto& r : results) s.y.push_back(r.aggregates[a].success_rate);
        series.push_back(std::move(s));
    }
    auto out = open_output(path);
    out << svg_line_chart("Exact recovery rate vs " + axis, axis, "success rate", x, series);
}

int execute_phase(const RunConfig& config, const RunOptions& options,
                  std::ofstream& csv, std::ofstream& json, const ConfigLines& lines) {
    const std::vector<int> m_grid = grid_range(config.m_min, config.m_max, config.m_step);
    const std::vector<int> k_grid = grid_range(config.k_min, config.k_max, config.k_step);
    const std::string& algorithm = config.algorithms.front();

    std::vector<SweepResult> results;
    std::vector<PhaseCell> cells;
    std::vector<double> values;
    std::vector<bool> masked;
    for (int m : m_grid) {
        for (int k : k_grid) {
            PhaseCell cell;
            cell.m = m;
            cell.K = k;
            cell.infeasible = (k < 1 || k >= config.n || m <= k);
            if (cell.infeasible) {
                std::cout << "phase algo=" << algorithm << " m=" << m << " K=" << k
                          << " infeasible\n";
            } else {
                EnsembleSpec spec;
                spec.n = config.n;
                spec.m = m;
                spec.K = k;
                spec.N = config.n_samples.front();
                spec.snr_db = config.snr_db;
                spec.trials = config.trials;
                spec.master_seed = config.master_seed;
                auto cell_results = run_sweep({spec}, {algorithm}, options);
                cell.success_rate = cell_results[0].aggregates[0].success_rate;
                std::cout << "phase algo=" << algorithm << " m=" << m << " K=" << k
                          << " success_rate=" << format_double(cell.success_rate) << "\n";
                results.push_back(std::move(cell_results[0]));
            }
            cells.push_back(cell);
            values.push_back(cell.success_rate);
            masked.push_back(cell.infeasible);
        }
    }

    write_csv(csv, results, lines);
    write_json(json, results, lines);
    if (config.emit_svg) {
        auto svg = open_output(std::filesystem::path(config.out_dir) / "phase.svg");
        svg << svg_heatmap("Exact recovery rate over (m, K)", "K", "m", k_grid, m_grid,
                           values, masked);
    }
    return 0;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    RunConfig config;
    CLI::App app{"Joint sparse recovery toolkit: subspace solvers and Monte-Carlo benchmarks"};

    app.add_option("command", config.command,
                   "one of: solve (single seeded instance), sweep (Monte-Carlo over one "
                   "spec or a one-parameter grid), phase (success-rate map over (m, K)), "
                   "hist (iteration histogram)")
        ->required();
    app.add_option("--n", config.n, "dictionary atom count (default 100)");
    app.add_option("--m", config.m_values, "measurement row count; sweep accepts a list")
        ->delimiter(',');
    app.add_option("--K", config.k_values, "row sparsity; sweep accepts a list")
        ->delimiter(',');
    app.add_option("--N", config.n_samples, "measurement vector count; sweep accepts a list")
        ->delimiter(',');
    app.add_option("--snr-db", config.snr_db, "noise level in dB; omit for noiseless");
    app.add_option("--trials", config.trials, "Monte-Carlo trials per cell (default 200)");
    app.add_option("--seed", config.master_seed, "64-bit master seed (default 0)");
    app.add_option("--algo", config.algorithms,
                   "algorithm to run, repeatable (default ss_music); one of: " +
                       join(algorithm_names(), ','))
        ->delimiter(',');
    app.add_option("--epsilon", config.epsilon_rel,
                   "convergence threshold relative to the squared MMV norm "
                   "(default 1e-8; noisy runs default to the noise floor)");
    app.add_option("--t-max", config.t_max, "iteration cap (default 100)");
    app.add_option("--out", config.out_dir, "output directory (default results)");
    app.add_flag("--emit-svg", config.emit_svg, "also write SVG charts");
    app.add_option("--threads", config.threads, "worker threads; 0 = all cores (default)");
    app.add_flag("--walltime", config.record_walltime,
                 "record wall-clock timings (off by default so reruns are byte-identical)");
    app.add_option("--m-min", config.m_min, "phase: smallest m (default 5)");
    app.add_option("--m-max", config.m_max, "phase: largest m (default 50)");
    app.add_option("--m-step", config.m_step, "phase: m stride (default 5)");
    app.add_option("--k-min", config.k_min, "phase: smallest K (default 5)");
    app.add_option("--k-max", config.k_max, "phase: largest K (default 50)");
    app.add_option("--k-step", config.k_step, "phase: K stride (default 5)");
    app.set_config("--config", "", "flat `key = value` configuration file; "
                                   "command-line flags win over file values");
    app.allow_config_extras(false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::CallForAllHelp&) {
        throw HelpRequested{app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& error) {
        throw ConfigError(error.what());
    }

    validate(config);
    return config;
}

int execute(const RunConfig& config) {
    RunOptions options;
    options.epsilon_rel = config.epsilon_rel;
    options.t_max = config.t_max;
    options.threads = config.threads;
    options.record_walltime = config.record_walltime;

    const std::filesystem::path out_dir(config.out_dir);
    std::error_code dir_error;
    std::filesystem::create_directories(out_dir, dir_error);
    if (dir_error) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " +
                                 dir_error.message());
    }
    // Probe writability before any computation starts.
    auto csv = open_output(out_dir / (config.command + ".csv"));
    auto json = open_output(out_dir / (config.command + ".json"));

    const ConfigLines lines = resolved_config(config);
    if (config.command == "phase") {
        return execute_phase(config, options, csv, json, lines);
    }

    std::vector<EnsembleSpec> grid;
    for (int m : config.m_values) {
        for (int k : config.k_values) {
            for (int samples : config.n_samples) {
                EnsembleSpec spec;
                spec.n = config.n;
                spec.m = m;
                spec.K = k;
                spec.N = samples;
                spec.snr_db = config.snr_db;
                spec.trials = config.command == "solve" ? 1 : config.trials;
                spec.master_seed = config.master_seed;
                grid.push_back(spec);
            }
        }
    }

    const auto results = run_sweep(grid, config.algorithms, options);
    write_csv(csv, results, lines);
    write_json(json, results, lines);

    for (const auto& result : results) {
        for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
            const auto& aggregate = result.aggregates[a];
            if (config.command == "solve") {
                const TrialRecord& record = result.records[a];
                std::cout << "solve algo=" << aggregate.algorithm << " "
                          << spec_summary(result.spec)
                          << " success=" << (record.success ? "true" : "false")
                          << " iterations=" << record.iterations
                          << " fitness=" << format_double(record.fitness_final) << "\n";
            } else {
                std::cout << config.command << " algo=" << aggregate.algorithm << " "
                          << spec_summary(result.spec) << " trials=" << result.spec.trials
                          << " success_rate=" << format_double(aggregate.success_rate) << "\n";
            }
        }
    }

    if (config.emit_svg) {
        if (config.command == "sweep") {
            emit_sweep_svg(config, results, out_dir / "sweep.svg");
        } else if (config.command == "hist") {
            for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
                auto svg =
                    open_output(out_dir / ("hist_" + config.algorithms[a] + ".svg"));
                svg << svg_bar_chart("Iterations per trial (" + config.algorithms[a] + ")",
                                     "iterations (failures at t_max + 1)", "trials",
                                     results[0].aggregates[a].iteration_histogram);
            }
        }
        // solve has nothing meaningful to chart.
    }
    return 0;
}

int cli_main(const std::vector<std::string>& args) {
    try {
        return execute(parse_config(args));
    } catch (const HelpRequested& help) {
        std::cout << help.text;
        return 0;
    } catch (const ConfigError& error) {
        std::cerr << "config error: " << error.what() << "\n";
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    }
}

}  // namespace jsr
