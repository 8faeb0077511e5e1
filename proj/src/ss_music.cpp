#include "jsr/ss_music.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "jsr/errors.hpp"

namespace jsr {

namespace {

SubspaceBasis signal_basis(const JsrProblem& problem, int r) {
    return orthonormal_basis(problem.mmv.matrix(), r);
}

void require_solvable(const JsrProblem& problem) {
    if (problem.mmv.squared_norm() == 0.0) {
        throw InvalidInputError("ss_music: Y is zero");
    }
    if (problem.row_sparsity > problem.dictionary.rows() - 1) {
        throw InvalidInputError("ss_music: requires K <= m - 1");
    }
}

}  // namespace

SolveResult music(const JsrProblem& problem, int r, std::optional<double> epsilon) {
    const Eigen::Index limit = std::min(problem.mmv.rows(), problem.mmv.sample_count());
    if (r < 1 || r > limit) {
        throw InvalidInputError("music: r must lie in [1, min(m, N)]");
    }
    const SubspaceBasis basis = signal_basis(problem, r);
    const LabelConfig labels = nsc_classify(problem.dictionary, all_atoms(problem.dictionary),
                                            basis, problem.row_sparsity);
    SolveResult result;
    result.support = support_of(labels);
    result.iterations = 1;
    result.fitness_final = fitness(result.support, problem);
    result.fitness_trace = {result.fitness_final};
    result.converged =
        result.fitness_final <= (epsilon ? *epsilon : noiseless_epsilon(problem.mmv));
    return result;
}

AtomSet candidate_step(const JsrProblem& problem, const AtomSet& current_positive, int r) {
    const int k = problem.row_sparsity;
    if (!(current_positive.empty() || current_positive.size() == k)) {
        throw InvalidInputError("candidate_step: positive set must be empty or of size K");
    }
    if (k - r < 1) {
        throw InvalidInputError("candidate_step: requires K - r >= 1");
    }

    Matrix projected;
    if (current_positive.empty()) {
        projected = problem.mmv.matrix();
    } else {
        const Matrix selected = problem.dictionary.columns(current_positive);
        const Eigen::Index rank = numerical_rank(selected);
        const SubspaceBasis span = rank == 0
                                       ? SubspaceBasis::trivial(selected.rows())
                                       : orthonormal_basis(selected, rank);
        projected = complement_project(span, problem.mmv.matrix());
    }

    // "Numerically zero" must be judged against the original signal scale;
    // the projected matrix's own spectrum is all float noise in that case.
    if (projected.norm() <= kDefaultRankTol * problem.mmv.matrix().norm()) {
        throw DegenerateStateError(
            "candidate_step: projected MMVs are numerically zero while labels are unfitted");
    }
    const SubspaceBasis feature = orthonormal_basis(projected, numerical_rank(projected));

    std::vector<std::pair<double, int>> ranked;
    for (int atom = 0; atom < problem.dictionary.atom_count(); ++atom) {
        if (current_positive.contains(atom)) continue;
        const Matrix residual = complement_project(feature, problem.dictionary.atom(atom));
        ranked.emplace_back(residual.norm(), atom);
    }
    std::sort(ranked.begin(), ranked.end());

    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(k - r));
    for (int i = 0; i < k - r; ++i) {
        chosen.push_back(ranked[static_cast<std::size_t>(i)].second);
    }
    return current_positive.unioned(AtomSet(std::move(chosen)));
}

AtomSet refine_training_set(const JsrProblem& problem, const AtomSet& candidates, int keep) {
    if (keep > candidates.size()) {
        throw InvalidInputError("refine_training_set: keep exceeds candidate count");
    }
    if (keep == candidates.size()) return candidates;

    const Matrix selected = problem.dictionary.columns(candidates);
    const Matrix coefficients = least_squares(selected, problem.mmv.matrix());

    // Largest row norms win; ties fall to the lower atom index, which is the
    // lower row index under AtomSet ordering.
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(static_cast<std::size_t>(candidates.size()));
    for (int row = 0; row < candidates.size(); ++row) {
        ranked.emplace_back(-coefficients.row(row).norm(), candidates.indices()[row]);
    }
    std::sort(ranked.begin(), ranked.end());

    std::vector<int> kept;
    kept.reserve(static_cast<std::size_t>(keep));
    for (int i = 0; i < keep; ++i) {
        kept.push_back(ranked[static_cast<std::size_t>(i)].second);
    }
    return AtomSet(std::move(kept));
}

LabelConfig augmented_classify(const JsrProblem& problem, const SubspaceBasis& signal,
                               const AtomSet& training) {
    return nsc_classify(problem.dictionary, all_atoms(problem.dictionary),
                        detail::augmented_basis(problem, signal, training),
                        problem.row_sparsity, training);
}

namespace detail {

SubspaceBasis augmented_basis(const JsrProblem& problem, const SubspaceBasis& signal,
                              const AtomSet& training) {
    if (training.empty()) return signal;
    Matrix joint(signal.ambient_dim(), signal.dim() + training.size());
    joint.leftCols(signal.dim()) = signal.matrix();
    joint.rightCols(training.size()) = problem.dictionary.columns(training);
    return orthonormal_basis(joint, numerical_rank(joint));
}

SolveResult ss_music_loop(const JsrProblem& problem, const SsMusicConfig& config,
                          const SubspaceBasis& signal, double epsilon) {
    require_solvable(problem);
    if (config.t_max < 1) {
        throw InvalidInputError("ss_music: t_max must be at least 1");
    }
    const int k = problem.row_sparsity;
    const int r = static_cast<int>(signal.dim());

    LabelConfig labels{std::vector<std::uint8_t>(
        static_cast<std::size_t>(problem.dictionary.atom_count()), 0)};
    double current_fitness = problem.mmv.squared_norm();

    SolveResult result;
    std::optional<LabelConfig> previous;
    // Each loop body either fits the configuration or must contribute at
    // least one new preserved positive atom toward the K - r the signal
    // basis is missing; a run that has not fitted within K - r + 1 bodies
    // (the extra body absorbs the final verifying classification) is
    // declared stalled instead of being allowed to churn until t_max.
    const int budget = std::min(config.t_max, k - r + 1);
    while (current_fitness > epsilon && result.iterations < budget) {
        AtomSet training;
        if (r < k) {
            const AtomSet candidates = candidate_step(problem, support_of(labels), r);
            training = refine_training_set(problem, candidates, k - r);
        }
        labels = augmented_classify(problem, signal, training);
        current_fitness = fitness(labels, problem);
        ++result.iterations;
        result.fitness_trace.push_back(current_fitness);

        // The loop is a deterministic map of the label configuration, so a
        // repeated configuration can never make further progress.
        if (previous && *previous == labels && current_fitness > epsilon) break;
        previous = labels;
    }

    result.support = support_of(labels);
    result.fitness_final = current_fitness;
    result.converged = current_fitness <= epsilon;
    return result;
}

}  // namespace detail

SolveResult ss_music(const JsrProblem& problem, const SsMusicConfig& config) {
    require_solvable(problem);
    int r = config.rank_override
                ? *config.rank_override
                : static_cast<int>(numerical_rank(problem.mmv.matrix()));
    if (r < 1) {
        throw InvalidInputError("ss_music: signal subspace dimension must be positive");
    }
    r = std::min(r, problem.row_sparsity);
    return detail::ss_music_loop(problem, config, signal_basis(problem, r),
                                 config.resolve_epsilon(problem.mmv));
}

}  // namespace jsr
