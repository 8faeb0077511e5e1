#include "jsr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "jsr/baselines.hpp"
#include "jsr/errors.hpp"
#include "jsr/noise.hpp"
#include "jsr/rng.hpp"

namespace jsr {

namespace {

class Fnv1a {
public:
    void bytes(const void* data, std::size_t size) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            hash_ ^= p[i];
            hash_ *= 1099511628211ull;
        }
    }
    void u64(std::uint64_t v) {
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
        bytes(buf, sizeof buf);
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        u64(bits);
    }
    void matrix(const Matrix& m) {
        u64(static_cast<std::uint64_t>(m.rows()));
        u64(static_cast<std::uint64_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) f64(m(i, j));
        }
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 1469598103934665603ull;
};

void require_spec(const EnsembleSpec& spec) {
    if (spec.n < 2 || spec.K < 1 || spec.K >= spec.n || spec.m < 1 || spec.N < 1) {
        throw InvalidInputError("EnsembleSpec: need n >= 2, 1 <= K < n, m >= 1, N >= 1");
    }
}

// Stream selector: distinct problem dimensions or noise levels must never
// share a Philox stream, while the same spec always maps to the same one.
std::uint32_t spec_fingerprint(const EnsembleSpec& spec) {
    Fnv1a h;
    h.u64(static_cast<std::uint64_t>(spec.n));
    h.u64(static_cast<std::uint64_t>(spec.m));
    h.u64(static_cast<std::uint64_t>(spec.K));
    h.u64(static_cast<std::uint64_t>(spec.N));
    if (spec.snr_db) {
        h.f64(*spec.snr_db);
    } else {
        h.u64(0x6e6f6e6f69736566ull);  // distinct tag for the noiseless stream
    }
    const std::uint64_t v = h.value();
    return static_cast<std::uint32_t>(v) ^ static_cast<std::uint32_t>(v >> 32);
}

double resolve_trial_epsilon_floor(const JsrProblem& problem, double sigma,
                                   double factor) {
    const double m = static_cast<double>(problem.mmv.rows());
    const double samples = static_cast<double>(problem.mmv.sample_count());
    return std::max(factor * m * samples * sigma * sigma,
                    noiseless_epsilon(problem.mmv));
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

namespace detail {

GeneratedTrial generate_trial(const EnsembleSpec& spec, int trial_index) {
    require_spec(spec);
    if (trial_index < 0) {
        throw InvalidInputError("generate_problem: trial index must be nonnegative");
    }
    Philox4x32 rng(spec.master_seed, spec_fingerprint(spec),
                   static_cast<std::uint32_t>(trial_index));

    Matrix atoms(spec.m, spec.n);
    for (Eigen::Index j = 0; j < atoms.cols(); ++j) {
        for (Eigen::Index i = 0; i < atoms.rows(); ++i) atoms(i, j) = rng.next_gaussian();
    }
    Dictionary dictionary(std::move(atoms));

    std::vector<int> pool(static_cast<std::size_t>(spec.n));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < spec.K; ++i) {
        const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint32_t>(spec.n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    AtomSet support(std::vector<int>(pool.begin(), pool.begin() + spec.K));

    Matrix coefficients(spec.K, spec.N);
    for (Eigen::Index j = 0; j < coefficients.cols(); ++j) {
        for (Eigen::Index i = 0; i < coefficients.rows(); ++i) {
            coefficients(i, j) = rng.next_gaussian();
        }
    }
    Matrix y = dictionary.columns(support) * coefficients;

    std::optional<double> noise_sigma;
    if (spec.snr_db) {
        Matrix noise(spec.m, spec.N);
        for (Eigen::Index j = 0; j < noise.cols(); ++j) {
            for (Eigen::Index i = 0; i < noise.rows(); ++i) noise(i, j) = rng.next_gaussian();
        }
        const double target = y.norm() * std::pow(10.0, -*spec.snr_db / 20.0);
        const double raw = noise.norm();
        if (target > 0.0 && raw > 0.0) {
            noise *= target / raw;
            y += noise;
            noise_sigma = target / std::sqrt(static_cast<double>(spec.m) *
                                             static_cast<double>(spec.N));
        } else {
            noise_sigma = 0.0;
        }
    }

    return GeneratedTrial{JsrProblem(std::move(dictionary), MmvMatrix(std::move(y)),
                                     spec.K, std::move(support)),
                          noise_sigma};
}

}  // namespace detail

JsrProblem generate_problem(const EnsembleSpec& spec, int trial_index) {
    return detail::generate_trial(spec, trial_index).problem;
}

std::uint64_t problem_hash(const JsrProblem& problem) {
    Fnv1a h;
    h.u64(static_cast<std::uint64_t>(problem.row_sparsity));
    h.matrix(problem.dictionary.matrix());
    h.matrix(problem.mmv.matrix());
    if (problem.true_support) {
        for (int atom : problem.true_support->indices()) {
            h.u64(static_cast<std::uint64_t>(atom));
        }
    }
    return h.value();
}

const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> names = {
        "ss_music", "music", "somp", "scosamp", "ra_ormp", "sa_music", "imusic"};
    return names;
}

bool algorithm_known(const std::string& name) {
    const auto& names = algorithm_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

SolveResult run_algorithm(const std::string& name, const JsrProblem& problem,
                          std::optional<double> noise_sigma, const RunOptions& options) {
    if (!algorithm_known(name)) {
        throw ConfigError("unknown algorithm: " + name);
    }

    // Threshold precedence: explicit relative epsilon, else the noise floor
    // (noisy runs), else each solver's noiseless default.
    std::optional<double> epsilon_abs;
    if (options.epsilon_rel) {
        epsilon_abs = *options.epsilon_rel * problem.mmv.squared_norm();
    } else if (noise_sigma) {
        epsilon_abs = resolve_trial_epsilon_floor(problem, *noise_sigma, 1.5);
    }

    SsMusicConfig config;
    config.epsilon = epsilon_abs;
    config.t_max = options.t_max;

    // Rank-aware baselines receive the estimated rank on noisy data and the
    // exact rank otherwise, mirroring how the noisy pipeline treats ss_music.
    const auto subspace_rank = [&]() -> int {
        if (noise_sigma) {
            return estimate_signal_subspace(problem.mmv, *noise_sigma).rank_estimate;
        }
        return static_cast<int>(numerical_rank(problem.mmv.matrix()));
    };

    if (name == "ss_music") {
        return noise_sigma ? ss_music_noisy(problem, config, *noise_sigma)
                           : ss_music(problem, config);
    }
    if (name == "music") {
        return music(problem, subspace_rank(), epsilon_abs);
    }
    if (name == "somp") {
        return somp(problem);
    }
    if (name == "scosamp") {
        return scosamp(problem, options.t_max, epsilon_abs);
    }
    if (name == "ra_ormp") {
        return ra_ormp(problem, subspace_rank());
    }
    if (name == "sa_music") {
        return sa_music(problem, std::min(subspace_rank(), problem.row_sparsity));
    }
    // imusic
    config.rank_override = std::min(subspace_rank(), problem.row_sparsity);
    return imusic(problem, config);
}

namespace {

// Shared Monte-Carlo driver; specs and algorithm names are assumed valid.
std::vector<SweepResult> run_cells(const std::vector<EnsembleSpec>& grid,
                                   const std::vector<std::string>& algorithms,
                                   const RunOptions& options) {
    struct Task {
        std::size_t spec_index;
        int trial;
    };
    std::vector<Task> tasks;
    std::vector<SweepResult> results(grid.size());
    for (std::size_t s = 0; s < grid.size(); ++s) {
        results[s].spec = grid[s];
        results[s].records.resize(algorithms.size() *
                                  static_cast<std::size_t>(grid[s].trials));
        for (int t = 0; t < grid[s].trials; ++t) tasks.push_back({s, t});
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr error;

    const auto worker = [&]() {
        for (;;) {
            if (failed.load(std::memory_order_relaxed)) return;
            const std::size_t index = next.fetch_add(1, std::memory_order_relaxed);
            if (index >= tasks.size()) return;
            const Task task = tasks[index];
            const EnsembleSpec& spec = grid[task.spec_index];
            try {
                const detail::GeneratedTrial trial = detail::generate_trial(spec, task.trial);
                const std::uint64_t hash = problem_hash(trial.problem);
                for (std::size_t a = 0; a < algorithms.size(); ++a) {
                    const auto start = std::chrono::steady_clock::now();
                    const SolveResult solve =
                        run_algorithm(algorithms[a], trial.problem, trial.noise_sigma, options);
                    const auto stop = std::chrono::steady_clock::now();

                    TrialRecord record;
                    record.algorithm = algorithms[a];
                    record.trial_index = task.trial;
                    record.success = trial.problem.true_support &&
                                     solve.support == *trial.problem.true_support;
                    record.iterations = solve.iterations;
                    record.fitness_final = solve.fitness_final;
                    record.wall_time_us =
                        options.record_walltime
                            ? std::chrono::duration_cast<std::chrono::microseconds>(stop - start)
                                  .count()
                            : 0;
                    record.problem_hash = hash;
                    results[task.spec_index]
                        .records[a * static_cast<std::size_t>(spec.trials) +
                                 static_cast<std::size_t>(task.trial)] = std::move(record);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    int thread_count = options.threads;
    if (thread_count <= 0) {
        thread_count = static_cast<int>(std::thread::hardware_concurrency());
        if (thread_count < 1) thread_count = 1;
    }
    thread_count = std::min<int>(thread_count, static_cast<int>(tasks.size()));
    if (thread_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(thread_count));
        for (int i = 0; i < thread_count; ++i) threads.emplace_back(worker);
        for (auto& thread : threads) thread.join();
    }
    if (error) std::rethrow_exception(error);

    for (auto& result : results) {
        const int trials = result.spec.trials;
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            AlgorithmAggregate aggregate;
            aggregate.algorithm = algorithms[a];
            double wall_total = 0.0;
            int successes = 0;
            for (int t = 0; t < trials; ++t) {
                const TrialRecord& record =
                    result.records[a * static_cast<std::size_t>(trials) +
                                   static_cast<std::size_t>(t)];
                successes += record.success ? 1 : 0;
                wall_total += static_cast<double>(record.wall_time_us);
                const int bin = record.success ? record.iterations : options.t_max + 1;
                ++aggregate.iteration_histogram[bin];
            }
            aggregate.success_rate = static_cast<double>(successes) / trials;
            aggregate.mean_wall_time_us = wall_total / trials;
            result.aggregates.push_back(std::move(aggregate));
        }
    }
    return results;
}

void require_run_inputs(const std::vector<EnsembleSpec>& grid,
                        const std::vector<std::string>& algorithms,
                        const RunOptions& options) {
    if (grid.empty()) throw ConfigError("run_sweep: empty spec grid");
    if (algorithms.empty()) throw ConfigError("run_sweep: no algorithms requested");
    for (const auto& name : algorithms) {
        if (!algorithm_known(name)) throw ConfigError("unknown algorithm: " + name);
    }
    for (const auto& spec : grid) {
        if (spec.n < 2 || spec.K < 1 || spec.K >= spec.n || spec.m < 1 || spec.N < 1) {
            throw ConfigError("invalid spec: need n >= 2, 1 <= K < n, m >= 1, N >= 1");
        }
        if (spec.m <= spec.K) {
            throw ConfigError("infeasible spec: m = " + std::to_string(spec.m) +
                              " does not exceed K = " + std::to_string(spec.K));
        }
        if (spec.trials < 1) throw ConfigError("invalid spec: trials must be >= 1");
    }
    if (options.t_max < 1) throw ConfigError("t_max must be >= 1");
    if (options.epsilon_rel && *options.epsilon_rel < 0.0) {
        throw ConfigError("epsilon must be nonnegative");
    }
}

}  // namespace

std::vector<SweepResult> run_sweep(const std::vector<EnsembleSpec>& grid,
                                   const std::vector<std::string>& algorithms,
                                   const RunOptions& options) {
    require_run_inputs(grid, algorithms, options);
    return run_cells(grid, algorithms, options);
}

PhaseResult phase_transition(const EnsembleSpec& base, const std::vector<int>& m_grid,
                             const std::vector<int>& k_grid, const std::string& algorithm,
                             const RunOptions& options) {
    if (m_grid.empty() || k_grid.empty()) {
        throw ConfigError("phase_transition: grids must be non-empty");
    }
    if (!algorithm_known(algorithm)) throw ConfigError("unknown algorithm: " + algorithm);
    if (base.trials < 1) throw ConfigError("invalid spec: trials must be >= 1");

    PhaseResult result;
    result.m_grid = m_grid;
    result.k_grid = k_grid;
    result.algorithm = algorithm;
    result.cells.reserve(m_grid.size() * k_grid.size());
    for (int m : m_grid) {
        for (int k : k_grid) {
            PhaseCell cell;
            cell.m = m;
            cell.K = k;
            cell.infeasible = (k < 1 || k >= base.n || m <= k);
            if (!cell.infeasible) {
                EnsembleSpec spec = base;
                spec.m = m;
                spec.K = k;
                cell.success_rate =
                    run_cells({spec}, {algorithm}, options)[0].aggregates[0].success_rate;
            }
            result.cells.push_back(cell);
        }
    }
    return result;
}

IterationHistogram iteration_histogram(const EnsembleSpec& spec, const std::string& algorithm,
                                       const RunOptions& options) {
    const auto results = run_sweep({spec}, {algorithm}, options);
    IterationHistogram histogram;
    histogram.bins = results[0].aggregates[0].iteration_histogram;
    histogram.overflow_key = options.t_max + 1;
    return histogram;
}

void write_csv(std::ostream& out, const std::vector<SweepResult>& results,
               const ConfigLines& config) {
    for (const auto& [key, value] : config) {
        out << "# " << key << " = " << value << "\n";
    }
    out << "algorithm,n,m,K,N,snr_db,trial,seed,success,iterations,fitness_final,"
           "wall_time_us,problem_hash\n";
    char hash_buf[24];
    for (const auto& result : results) {
        const EnsembleSpec& spec = result.spec;
        const std::string snr = spec.snr_db ? format_double(*spec.snr_db) : "";
        for (const auto& record : result.records) {
            std::snprintf(hash_buf, sizeof hash_buf, "%016" PRIx64, record.problem_hash);
            out << record.algorithm << ',' << spec.n << ',' << spec.m << ',' << spec.K << ','
                << spec.N << ',' << snr << ',' << record.trial_index << ','
                << spec.master_seed << ',' << (record.success ? 1 : 0) << ','
                << record.iterations << ',' << format_double(record.fitness_final) << ','
                << record.wall_time_us << ',' << hash_buf << "\n";
        }
    }
}

void write_json(std::ostream& out, const std::vector<SweepResult>& results,
                const ConfigLines& config) {
    nlohmann::json doc;
    doc["schema"] = 1;
    nlohmann::json config_object = nlohmann::json::object();
    for (const auto& [key, value] : config) config_object[key] = value;
    doc["config"] = config_object;

    nlohmann::json entries = nlohmann::json::array();
    for (const auto& result : results) {
        nlohmann::json entry;
        const EnsembleSpec& spec = result.spec;
        entry["spec"] = {{"n", spec.n},
                         {"m", spec.m},
                         {"K", spec.K},
                         {"N", spec.N},
                         {"snr_db", spec.snr_db ? nlohmann::json(*spec.snr_db)
                                                : nlohmann::json(nullptr)},
                         {"trials", spec.trials},
                         {"master_seed", spec.master_seed}};
        nlohmann::json algorithms = nlohmann::json::array();
        for (const auto& aggregate : result.aggregates) {
            nlohmann::json histogram = nlohmann::json::object();
            for (const auto& [bin, count] : aggregate.iteration_histogram) {
                histogram[std::to_string(bin)] = count;
            }
            algorithms.push_back({{"name", aggregate.algorithm},
                                  {"success_rate", aggregate.success_rate},
                                  {"mean_wall_time_us", aggregate.mean_wall_time_us},
                                  {"iteration_histogram", histogram}});
        }
        entry["algorithms"] = algorithms;
        entries.push_back(entry);
    }
    doc["results"] = entries;
    out << doc.dump(2) << "\n";
}

}  // namespace jsr
