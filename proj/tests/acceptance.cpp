// Acceptance gate: exercises the end-to-end behavior the toolkit promises and
// prints exactly one PASS/FAIL line per criterion. Exit code 0 only if all
// criteria pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "jsr/baselines.hpp"
#include "jsr/harness.hpp"
#include "jsr/noise.hpp"
#include "jsr/ss_music.hpp"
#include "oracles.hpp"

namespace {

using jsr::AtomSet;
using jsr::EnsembleSpec;
using jsr::Matrix;
using jsr::SweepResult;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

EnsembleSpec spec_of(int n, int m, int k, int samples, int trials,
                     std::optional<double> snr_db = std::nullopt) {
    EnsembleSpec spec;
    spec.n = n;
    spec.m = m;
    spec.K = k;
    spec.N = samples;
    spec.trials = trials;
    spec.snr_db = snr_db;
    spec.master_seed = 0;
    return spec;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

// Iteration counts of the successful trials of one algorithm's record block.
std::vector<int> successful_iterations(const SweepResult& result, std::size_t algo_index) {
    std::vector<int> iterations;
    const int trials = result.spec.trials;
    for (int t = 0; t < trials; ++t) {
        const auto& record =
            result.records[algo_index * static_cast<std::size_t>(trials) +
                           static_cast<std::size_t>(t)];
        if (record.success) iterations.push_back(record.iterations);
    }
    return iterations;
}

// --- Criteria -------------------------------------------------------------

// Collected along the way for the iteration-bound criterion: one entry per
// successful music/ss_music trial with its structural subspace bound K - r + 1.
struct BoundedRun {
    int iterations;
    int bound;
};
std::vector<BoundedRun> g_bounded_runs;

void collect_bounds(const SweepResult& result, std::size_t algo_index, int r) {
    const int bound = result.spec.K - r + 1;
    for (int iterations : successful_iterations(result, algo_index)) {
        g_bounded_runs.push_back({iterations, bound});
    }
}

Outcome criterion1() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 1.0;
    for (int k : {5, 10, 15, 19}) {
        const auto results =
            jsr::run_sweep({spec_of(100, k + 1, k, 20, 100)}, {"music", "ss_music"}, {});
        for (std::size_t a = 0; a < 2; ++a) {
            worst = std::min(worst, results[0].aggregates[a].success_rate);
            collect_bounds(results[0], a, k);  // full-rank data: r = K
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = worst >= 0.99 && elapsed < 60.0;
    return {pass, fmt("worst_rate=%.3f elapsed=%.1fs (need rate>=0.99, <60s)", worst, elapsed)};
}

Outcome criterion2() {
    const auto start = std::chrono::steady_clock::now();
    const auto results = jsr::run_sweep({spec_of(100, 40, 30, 20, 200)}, {"ss_music"}, {});
    const auto& aggregate = results[0].aggregates[0];
    collect_bounds(results[0], 0, 20);  // r = min(K, N) = 20

    int modal_bin = 0;
    int modal_count = -1;
    for (const auto& [bin, count] : aggregate.iteration_histogram) {
        if (bin <= 100 && count > modal_count) {  // 101 is the failure bin
            modal_count = count;
            modal_bin = bin;
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = aggregate.success_rate >= 0.99 && modal_bin >= 1 && modal_bin <= 3 &&
                      elapsed < 300.0;
    return {pass, fmt("rate=%.3f modal_iterations=%d elapsed=%.1fs "
                      "(need rate>=0.99, mode in [1,3], <300s)",
                      aggregate.success_rate, modal_bin, elapsed)};
}

Outcome criterion3() {
    const auto results =
        jsr::run_sweep({spec_of(100, 35, 30, 20, 200)}, {"ss_music", "imusic"}, {});
    const double ss_rate = results[0].aggregates[0].success_rate;
    const double im_rate = results[0].aggregates[1].success_rate;
    collect_bounds(results[0], 0, 20);

    std::vector<int> iterations = successful_iterations(results[0], 1);
    std::sort(iterations.begin(), iterations.end());
    double median = 0.0;
    if (!iterations.empty()) {
        const std::size_t half = iterations.size() / 2;
        median = iterations.size() % 2 == 1
                     ? iterations[half]
                     : (iterations[half - 1] + iterations[half]) / 2.0;
    }
    const bool pass = ss_rate >= 0.95 && im_rate >= 0.55 && im_rate <= 0.85 &&
                      median >= 9.0 && median <= 15.0;
    return {pass, fmt("ss_rate=%.3f imusic_rate=%.3f imusic_median_iters=%.1f "
                      "(need ss>=0.95, imusic in [0.55,0.85], median in [9,15])",
                      ss_rate, im_rate, median)};
}

Outcome criterion4() {
    const auto results = jsr::run_sweep({spec_of(100, 31, 30, 20, 200)}, {"ss_music"}, {});
    const double rate = results[0].aggregates[0].success_rate;
    collect_bounds(results[0], 0, 20);
    return {rate >= 0.90, fmt("rate=%.3f (need >=0.90)", rate)};
}

Outcome criterion5() {
    // Part 1: every successful music/ss_music trial recorded by criteria 1-4
    // finished within K - r + 1 iterations.
    int violations = 0;
    for (const auto& run : g_bounded_runs) {
        if (run.iterations > run.bound) ++violations;
    }

    // Part 2: sa_music always reports exactly K - r iterations, converged or
    // not: K - r = 10 on rank-defective cells, 0 on full-rank ones.
    int sa_violations = 0;
    const auto defective = jsr::run_sweep({spec_of(100, 40, 30, 20, 100)}, {"sa_music"}, {});
    for (const auto& record : defective[0].records) {
        if (record.iterations != 10) ++sa_violations;
    }
    const auto full_rank = jsr::run_sweep({spec_of(100, 20, 19, 20, 100)}, {"sa_music"}, {});
    for (const auto& record : full_rank[0].records) {
        if (record.iterations != 0) ++sa_violations;
    }

    const bool pass = violations == 0 && sa_violations == 0 && !g_bounded_runs.empty();
    return {pass, fmt("bound_violations=%d/%zu sa_music_violations=%d/200 "
                      "(need 0 and 0)",
                      violations, g_bounded_runs.size(), sa_violations)};
}

Outcome criterion6() {
    const std::vector<std::string> algorithms = {"ss_music", "somp",     "scosamp",
                                                 "ra_ormp",  "sa_music", "imusic"};
    std::vector<EnsembleSpec> grid;
    for (int m = 31; m <= 45; m += 2) grid.push_back(spec_of(100, m, 30, 20, 100));

    const auto results = jsr::run_sweep(grid, algorithms, {});
    double worst_margin = 1.0;
    int worst_m = 0;
    std::string worst_algo;
    for (const auto& result : results) {
        const double ss_rate = result.aggregates[0].success_rate;
        for (std::size_t a = 1; a < algorithms.size(); ++a) {
            const double margin = ss_rate - result.aggregates[a].success_rate;
            if (margin < worst_margin) {
                worst_margin = margin;
                worst_m = result.spec.m;
                worst_algo = algorithms[a];
            }
        }
    }
    const bool pass = worst_margin >= -0.05;
    return {pass, fmt("worst_margin=%.3f vs %s at m=%d (need >=-0.05)", worst_margin,
                      worst_algo.c_str(), worst_m)};
}

Outcome criterion7() {
    const auto spec = spec_of(8, 6, 3, 2, 50);
    int converged = 0;
    int mismatches = 0;
    int oracle_misfits = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto problem = jsr::generate_problem(spec, trial);
        const auto result = jsr::ss_music(problem);
        const auto best = oracle::exhaustive_best_support(problem.dictionary.matrix(),
                                                          problem.mmv.matrix(), 3);
        if (jsr::fitness(AtomSet(best.support), problem) >
            1e-12 * problem.mmv.squared_norm()) {
            ++oracle_misfits;
        }
        if (result.converged) {
            ++converged;
            if (!(result.support == AtomSet(best.support))) ++mismatches;
        }
    }
    const bool pass = mismatches == 0 && oracle_misfits == 0 && converged >= 45;
    return {pass, fmt("converged=%d/50 oracle_mismatches=%d oracle_misfits=%d "
                      "(need 0 mismatches, 0 misfits, >=45 converged)",
                      converged, mismatches, oracle_misfits)};
}

Outcome criterion8() {
    int failures = 0;
    std::string first_failure;
    const auto record_failure = [&](const std::string& what, int case_index) {
        ++failures;
        if (first_failure.empty()) {
            first_failure = what + " at case " + std::to_string(case_index);
        }
    };

    for (int case_index = 0; case_index < 1000; ++case_index) {
        const std::uint32_t seed = 0x8000u + static_cast<std::uint32_t>(case_index);
        std::mt19937 gen(seed);
        const int m = 4 + static_cast<int>(gen() % 9);       // 4..12
        const int d = 1 + static_cast<int>(gen() % (m - 1)); // 1..m-1
        const int s = 1 + static_cast<int>(gen() % 5);       // 1..5

        const Matrix b = oracle::random_matrix(m, d, seed);
        const Matrix data = oracle::random_matrix(m, s, seed + 1);
        const auto basis = jsr::orthonormal_basis(b, jsr::numerical_rank(b));

        const Matrix gram = basis.matrix().transpose() * basis.matrix();
        if ((gram - Matrix::Identity(basis.dim(), basis.dim())).cwiseAbs().maxCoeff() > 1e-10) {
            record_failure("orthonormality", case_index);
        }
        const Matrix once = jsr::project(basis, data);
        if ((jsr::project(basis, once) - once).norm() > 1e-12 * data.norm()) {
            record_failure("idempotence", case_index);
        }
        const Matrix rest = jsr::complement_project(basis, data);
        if ((once + rest - data).norm() > 1e-12 * data.norm()) {
            record_failure("decomposition", case_index);
        }
        const Matrix solution = jsr::least_squares(b, data);
        if ((b.transpose() * (data - b * solution)).norm() >
            1e-8 * (b.norm() * data.norm())) {
            record_failure("ls_orthogonality", case_index);
        }

        // Planted-support fitness and generator determinism on a tiny spec.
        const int k = 1 + static_cast<int>(gen() % 3);
        const auto spec = spec_of(k + 4, k + 2, k, 1 + static_cast<int>(gen() % 4), 1);
        auto seeded = spec;
        seeded.master_seed = seed;
        const auto problem = jsr::generate_problem(seeded, case_index);
        if (jsr::fitness(*problem.true_support, problem) >
            1e-12 * problem.mmv.squared_norm()) {
            record_failure("fitness_zero", case_index);
        }
        if (jsr::problem_hash(problem) !=
            jsr::problem_hash(jsr::generate_problem(seeded, case_index))) {
            record_failure("hash_equality", case_index);
        }

        if (case_index % 50 == 0) {
            // Byte-identical reruns of a small end-to-end sweep.
            std::ostringstream first, second;
            auto sweep_spec = seeded;
            sweep_spec.trials = 2;
            jsr::write_csv(first, jsr::run_sweep({sweep_spec}, {"ss_music"}, {}), {});
            jsr::write_csv(second, jsr::run_sweep({sweep_spec}, {"ss_music"}, {}), {});
            if (first.str() != second.str()) record_failure("byte_identical", case_index);
        }
    }
    return {failures == 0,
            failures == 0 ? std::string("1000 cases, all invariants hold")
                          : fmt("failures=%d first=%s", failures, first_failure.c_str())};
}

Outcome criterion9() {
    // Part 1: the noisy path at zero noise is the noiseless solver, per seed.
    int equivalence_breaks = 0;
    for (std::uint32_t seed = 1; seed <= 20; ++seed) {
        const auto instance = oracle::planted_instance(20, 30, 8, 10, 4, 900 + seed);
        const jsr::JsrProblem problem(jsr::Dictionary(instance.atoms),
                                      jsr::MmvMatrix(instance.y), 8,
                                      AtomSet(instance.support));
        const auto exact = jsr::ss_music(problem);
        const auto zero_sigma = jsr::ss_music_noisy(problem, {}, 0.0);
        const auto gap_rule = jsr::ss_music_noisy(problem);
        for (const auto* noisy : {&zero_sigma, &gap_rule}) {
            if (!(noisy->support == exact.support) || noisy->iterations != exact.iterations ||
                noisy->converged != exact.converged) {
                ++equivalence_breaks;
            }
        }
    }

    // Part 2: known-sigma rank estimation at SNR 40 dB.
    const auto rank_spec = spec_of(100, 40, 30, 20, 100, 40.0);
    int rank_correct = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto trial_data = jsr::detail::generate_trial(rank_spec, trial);
        const auto estimate =
            jsr::estimate_signal_subspace(trial_data.problem.mmv, trial_data.noise_sigma);
        if (estimate.rank_estimate == 20) ++rank_correct;
    }

    // Part 3: recovery rate non-decreasing in SNR (5-point sampling slack).
    std::vector<double> rates;
    for (double snr : {10.0, 20.0, 30.0, 40.0}) {
        const auto results =
            jsr::run_sweep({spec_of(100, 40, 30, 20, 100, snr)}, {"ss_music"}, {});
        rates.push_back(results[0].aggregates[0].success_rate);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < rates.size(); ++i) {
        if (rates[i] < rates[i - 1] - 0.05) monotone = false;
    }

    const bool pass = equivalence_breaks == 0 && rank_correct >= 95 && monotone;
    return {pass, fmt("equivalence_breaks=%d rank_correct=%d/100 "
                      "snr_rates=[%.2f,%.2f,%.2f,%.2f] "
                      "(need 0 breaks, >=95, non-decreasing within 0.05)",
                      equivalence_breaks, rank_correct, rates[0], rates[1], rates[2],
                      rates[3])};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"C1", criterion1}, {"C2", criterion2}, {"C3", criterion3},
        {"C4", criterion4}, {"C5", criterion5}, {"C6", criterion6},
        {"C7", criterion7}, {"C8", criterion8}, {"C9", criterion9},
    };

    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& error) {
            outcome = {false, std::string("exception: ") + error.what()};
        }
        if (!outcome.pass) ++failed;
        std::printf("%s %s %s\n", name, outcome.pass ? "PASS" : "FAIL",
                    outcome.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
