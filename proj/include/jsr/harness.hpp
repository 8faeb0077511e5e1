#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jsr/model.hpp"
#include "jsr/ss_music.hpp"

namespace jsr {

/// One Monte-Carlo ensemble cell: problem sizes, optional noise level,
/// trial count, and the seed all trial streams derive from.
struct EnsembleSpec {
    int n = 100;
    int m = 0;
    int K = 0;
    int N = 20;
    std::optional<double> snr_db;
    int trials = 200;
    std::uint64_t master_seed = 0;
};

/// Outcome of one (algorithm, trial) cell. success means the recovered
/// support equals the generated true support exactly. wall_time_us is 0
/// when timing is disabled (RunOptions::record_walltime = false).
struct TrialRecord {
    std::string algorithm;
    int trial_index = 0;
    bool success = false;
    int iterations = 0;
    double fitness_final = 0.0;
    std::int64_t wall_time_us = 0;
    std::uint64_t problem_hash = 0;
};

/// Per-algorithm aggregate over one spec. The iteration histogram counts
/// every trial: successes under their iteration count, failures under the
/// overflow bin t_max + 1.
struct AlgorithmAggregate {
    std::string algorithm;
    double success_rate = 0.0;
    std::map<int, int> iteration_histogram;
    double mean_wall_time_us = 0.0;
};

struct SweepResult {
    EnsembleSpec spec;
    std::vector<AlgorithmAggregate> aggregates;  // in requested algorithm order
    /// Flattened records: algorithms in requested order, trials ascending
    /// within each algorithm (records[a * trials + t]).
    std::vector<TrialRecord> records;
};

/// Execution knobs shared by the experiment drivers.
struct RunOptions {
    /// Convergence threshold relative to ||Y||_F^2. Unset: noiseless runs use
    /// the solver defaults, noisy runs use the noise-floor rule.
    std::optional<double> epsilon_rel;
    int t_max = 100;
    /// Worker threads; 0 means the available hardware parallelism.
    int threads = 0;
    /// Wall-clock timing is opt-in: the default keeps wall_time_us at 0 so
    /// identical runs produce byte-identical output files.
    bool record_walltime = false;
};

/// Registered algorithm names, in canonical order.
const std::vector<std::string>& algorithm_names();
bool algorithm_known(const std::string& name);

/// Deterministic seeded instance: Gaussian dictionary (atoms normalized),
/// uniformly random K-subset support, Gaussian coefficients on the support,
/// Y = A X, plus Gaussian noise scaled to spec.snr_db when set. The same
/// (spec sizes, snr_db, master_seed, trial_index) always yields the same
/// problem, independent of call order or thread.
JsrProblem generate_problem(const EnsembleSpec& spec, int trial_index);

/// Content hash (FNV-1a over the problem bytes); equal problems hash equal.
std::uint64_t problem_hash(const JsrProblem& problem);

/// Runs one algorithm on one problem the way the sweep drivers do, including
/// the noisy-path rank/threshold handling. noise_sigma is the per-entry noise
/// deviation when the problem was generated with noise.
SolveResult run_algorithm(const std::string& name, const JsrProblem& problem,
                          std::optional<double> noise_sigma, const RunOptions& options);

/// Runs every (spec, algorithm, trial) cell on a worker pool. Trials are
/// paired: every algorithm sees the identical problem instance per
/// (spec, trial). Results are deterministic regardless of thread count.
std::vector<SweepResult> run_sweep(const std::vector<EnsembleSpec>& grid,
                                   const std::vector<std::string>& algorithms,
                                   const RunOptions& options = {});

struct PhaseCell {
    int m = 0;
    int K = 0;
    double success_rate = 0.0;
    bool infeasible = false;  // m <= K (or K >= n): expected failure, not run
};

struct PhaseResult {
    std::vector<int> m_grid;
    std::vector<int> k_grid;
    std::string algorithm;
    /// Row-major over (m, K): cells[i * k_grid.size() + j].
    std::vector<PhaseCell> cells;
};

/// Success-rate surface over an (m, K) grid; base supplies n, N, snr_db,
/// trials and master_seed. Infeasible cells are flagged and skipped.
PhaseResult phase_transition(const EnsembleSpec& base, const std::vector<int>& m_grid,
                             const std::vector<int>& k_grid, const std::string& algorithm,
                             const RunOptions& options = {});

struct IterationHistogram {
    std::map<int, int> bins;
    int overflow_key = 0;  // t_max + 1; failures land here
};

IterationHistogram iteration_histogram(const EnsembleSpec& spec, const std::string& algorithm,
                                       const RunOptions& options = {});

/// Ordered key/value pairs describing a resolved run; embedded in every
/// output file so results are self-describing.
using ConfigLines = std::vector<std::pair<std::string, std::string>>;

/// Trial-level CSV: `# key = value` comment lines, a fixed header, then one
/// row per (spec, algorithm, trial).
void write_csv(std::ostream& out, const std::vector<SweepResult>& results,
               const ConfigLines& config);

/// Aggregate JSON document (schema 1) mirroring SweepResult.
void write_json(std::ostream& out, const std::vector<SweepResult>& results,
                const ConfigLines& config);

namespace detail {
/// generate_problem plus the per-entry noise deviation actually applied,
/// which the noisy drivers feed back into the estimators.
struct GeneratedTrial {
    JsrProblem problem;
    std::optional<double> noise_sigma;
};

GeneratedTrial generate_trial(const EnsembleSpec& spec, int trial_index);
}  // namespace detail

}  // namespace jsr
