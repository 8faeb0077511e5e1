#include "jsr/baselines.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "jsr/errors.hpp"

namespace jsr {

namespace {

struct GreedyRun {
    std::vector<int> selected;   // in selection order
    Matrix residual;
    std::vector<double> trace;   // residual energy after each step
};

// SOMP-style greedy selection: per step, take the atom whose correlation row
// with the residual has the largest l2 norm (ties to the lowest index), then
// refit by least squares so the residual is the exact projection remainder.
GreedyRun somp_steps(const JsrProblem& problem, int steps) {
    const Matrix& a = problem.dictionary.matrix();
    const Matrix& y = problem.mmv.matrix();

    GreedyRun run;
    run.residual = y;
    std::vector<char> taken(static_cast<std::size_t>(a.cols()), 0);
    for (int step = 0; step < steps; ++step) {
        const Matrix correlations = a.transpose() * run.residual;
        int best = -1;
        double best_score = -1.0;
        for (int atom = 0; atom < a.cols(); ++atom) {
            if (taken[static_cast<std::size_t>(atom)]) continue;
            const double score = correlations.row(atom).norm();
            if (score > best_score) {
                best_score = score;
                best = atom;
            }
        }
        taken[static_cast<std::size_t>(best)] = 1;
        run.selected.push_back(best);

        const Matrix selected_cols = problem.dictionary.columns(AtomSet(run.selected));
        run.residual = y - selected_cols * least_squares(selected_cols, y);
        run.trace.push_back(run.residual.squaredNorm());
    }
    return run;
}

// The `keep` atoms of `candidates` with the largest least-squares solution
// row norms against Y, ties to the lowest atom index, in ranking order.
std::vector<int> top_rows_by_fit(const JsrProblem& problem, const AtomSet& candidates,
                                 int keep) {
    const Matrix coefficients =
        least_squares(problem.dictionary.columns(candidates), problem.mmv.matrix());
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
    return kept;
}

SolveResult classify_against(const JsrProblem& problem, const SubspaceBasis& signal,
                             const AtomSet& forced) {
    SolveResult result;
    const LabelConfig labels = augmented_classify(problem, signal, forced);
    result.support = support_of(labels);
    result.fitness_final = fitness(result.support, problem);
    result.converged = result.fitness_final <= noiseless_epsilon(problem.mmv);
    return result;
}

}  // namespace

SolveResult somp(const JsrProblem& problem) {
    if (problem.row_sparsity > problem.dictionary.rows()) {
        throw InvalidInputError("somp: requires K <= m");
    }
    const GreedyRun run = somp_steps(problem, problem.row_sparsity);

    SolveResult result;
    result.support = AtomSet(run.selected);
    result.iterations = problem.row_sparsity;
    result.fitness_trace = run.trace;
    result.fitness_final = run.trace.back();
    result.converged = result.fitness_final <= noiseless_epsilon(problem.mmv);
    return result;
}

SolveResult scosamp(const JsrProblem& problem, int t_max, std::optional<double> epsilon) {
    if (t_max < 1) {
        throw InvalidInputError("scosamp: t_max must be at least 1");
    }
    const Matrix& a = problem.dictionary.matrix();
    const Matrix& y = problem.mmv.matrix();
    const int n = static_cast<int>(a.cols());
    const int k = problem.row_sparsity;
    const double eps = epsilon ? *epsilon : noiseless_epsilon(problem.mmv);

    AtomSet support;
    Matrix residual = y;
    double fit = problem.mmv.squared_norm();

    SolveResult result;
    while ((fit > eps || support.empty()) && result.iterations < t_max) {
        // Proxy stage: the min(2K, n) atoms best correlated with the residual.
        const Matrix correlations = a.transpose() * residual;
        std::vector<std::pair<double, int>> ranked;
        ranked.reserve(static_cast<std::size_t>(n));
        for (int atom = 0; atom < n; ++atom) {
            ranked.emplace_back(-correlations.row(atom).norm(), atom);
        }
        std::sort(ranked.begin(), ranked.end());
        std::vector<int> merged = support.indices();
        for (int i = 0; i < std::min(2 * k, n); ++i) {
            const int atom = ranked[static_cast<std::size_t>(i)].second;
            if (!support.contains(atom)) merged.push_back(atom);
        }

        const AtomSet next(top_rows_by_fit(problem, AtomSet(std::move(merged)), k));
        const Matrix next_cols = problem.dictionary.columns(next);
        const Matrix next_residual = y - next_cols * least_squares(next_cols, y);
        const double next_fit = next_residual.squaredNorm();

        // Reject a step that would increase the residual; the kept state is
        // the best one seen, so the reported trace is non-increasing.
        if (next_fit > fit * (1.0 + 1e-12)) break;

        const bool fixed_point = next == support;
        support = next;
        residual = next_residual;
        fit = next_fit;
        ++result.iterations;
        result.fitness_trace.push_back(fit);
        if (fixed_point) break;
    }

    result.support = support;
    result.fitness_final = fit;
    result.converged = fit <= eps;
    return result;
}

SolveResult ra_ormp(const JsrProblem& problem, int r) {
    const int m = static_cast<int>(problem.dictionary.rows());
    const int n = static_cast<int>(problem.dictionary.atom_count());
    const int k = problem.row_sparsity;
    if (k > m) {
        throw InvalidInputError("ra_ormp: requires K <= m");
    }
    const SubspaceBasis signal = orthonormal_basis(problem.mmv.matrix(), r);

    std::vector<int> selected;
    std::vector<double> trace;
    Matrix q(m, 0);  // orthonormal basis of the selected atoms, grown per step
    for (int step = 0; step < k; ++step) {
        int best = -1;
        double best_score = -1.0;
        Vector best_deflated;
        for (int atom = 0; atom < n; ++atom) {
            if (std::find(selected.begin(), selected.end(), atom) != selected.end()) continue;
            Vector deflated = problem.dictionary.atom(atom);
            if (q.cols() > 0) {
                deflated -= q * (q.transpose() * deflated);
                deflated -= q * (q.transpose() * deflated);  // re-orthogonalize
            }
            const double norm = deflated.norm();
            if (norm <= kDefaultRankTol) continue;  // atom already spanned
            const double score = (signal.matrix().transpose() * deflated).norm() / norm;
            if (score > best_score) {
                best_score = score;
                best = atom;
                best_deflated = deflated / norm;
            }
        }
        if (best < 0) {
            throw DegenerateStateError(
                "ra_ormp: every remaining atom lies in the span of the selected set");
        }
        selected.push_back(best);
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = best_deflated;
        const Matrix residual =
            problem.mmv.matrix() - q * (q.transpose() * problem.mmv.matrix());
        trace.push_back(residual.squaredNorm());
    }

    SolveResult result;
    result.support = AtomSet(std::move(selected));
    result.iterations = k;
    result.fitness_trace = std::move(trace);
    result.fitness_final = result.fitness_trace.back();
    result.converged = result.fitness_final <= noiseless_epsilon(problem.mmv);
    return result;
}

SolveResult sa_music(const JsrProblem& problem, int r) {
    if (r > problem.row_sparsity) {
        throw InvalidInputError("sa_music: requires r <= K");
    }
    const SubspaceBasis signal = orthonormal_basis(problem.mmv.matrix(), r);
    const GreedyRun stage1 = somp_steps(problem, problem.row_sparsity - r);

    SolveResult result = classify_against(problem, signal, AtomSet(stage1.selected));
    result.iterations = problem.row_sparsity - r;
    result.fitness_trace = stage1.trace;
    return result;
}

SolveResult sa_music_with_stage1(const JsrProblem& problem, int r, const AtomSet& stage1) {
    if (r > problem.row_sparsity) {
        throw InvalidInputError("sa_music: requires r <= K");
    }
    if (stage1.size() != problem.row_sparsity - r) {
        throw InvalidInputError("sa_music: stage-1 set must have K - r atoms");
    }
    const SubspaceBasis signal = orthonormal_basis(problem.mmv.matrix(), r);

    SolveResult result = classify_against(problem, signal, stage1);
    result.iterations = problem.row_sparsity - r;
    result.fitness_trace.assign(static_cast<std::size_t>(result.iterations), 0.0);
    if (!result.fitness_trace.empty()) result.fitness_trace.back() = result.fitness_final;
    return result;
}

SolveResult imusic(const JsrProblem& problem, const SsMusicConfig& config) {
    if (problem.mmv.squared_norm() == 0.0) {
        throw InvalidInputError("imusic: Y is zero");
    }
    if (problem.row_sparsity > problem.dictionary.rows() - 1) {
        throw InvalidInputError("imusic: requires K <= m - 1");
    }
    const int k = problem.row_sparsity;
    int r = config.rank_override
                ? *config.rank_override
                : static_cast<int>(numerical_rank(problem.mmv.matrix()));
    if (r < 1) {
        throw InvalidInputError("imusic: signal subspace dimension must be positive");
    }
    r = std::min(r, k);
    if (config.t_max < k - r + 1) {
        throw InvalidInputError("imusic: t_max too small to finish initialization");
    }
    const double eps = config.resolve_epsilon(problem.mmv);
    const SubspaceBasis signal = orthonormal_basis(problem.mmv.matrix(), r);
    const int n = static_cast<int>(problem.dictionary.atom_count());

    SolveResult result;

    // Initialization: K - r greedy steps, then one augmented classification.
    const GreedyRun init = somp_steps(problem, k - r);
    result.iterations = k - r;
    result.fitness_trace = init.trace;
    AtomSet training(init.selected);

    LabelConfig labels = augmented_classify(problem, signal, training);
    double fit = fitness(labels, problem);
    ++result.iterations;
    result.fitness_trace.push_back(fit);

    // Refinement: grow a 2K - r candidate set by classifying the negatives
    // against the augmented subspace, then let the K best-fitting candidates
    // become the label configuration outright. Two properties keep this
    // selection cruder than the semi-supervised update it approximates:
    // the candidate fit stays full column rank (pools larger than m are
    // culled to the m atoms nearest the signal subspace), and the first
    // refinement pass runs unconditionally on rank-defective input, so it
    // can disturb a configuration the initialization already got right.
    bool pending = r < k;
    while ((pending || fit > eps) && result.iterations < config.t_max) {
        pending = false;
        const SubspaceBasis augmented = detail::augmented_basis(problem, signal, training);
        std::vector<int> negatives;
        negatives.reserve(static_cast<std::size_t>(n - k));
        for (int atom = 0; atom < n; ++atom) {
            if (!labels.labels[static_cast<std::size_t>(atom)]) negatives.push_back(atom);
        }
        const LabelConfig picked =
            nsc_classify(problem.dictionary, AtomSet(std::move(negatives)), augmented, k - r);
        AtomSet candidates = support_of(labels).unioned(support_of(picked));
        const int cap = static_cast<int>(problem.dictionary.rows());
        if (candidates.size() > cap) {
            candidates = support_of(nsc_classify(problem.dictionary, candidates, signal, cap));
        }

        const std::vector<int> ranked = top_rows_by_fit(problem, candidates, k);
        LabelConfig next = labels_of(AtomSet(ranked), n);
        training = AtomSet(std::vector<int>(ranked.begin(), ranked.begin() + (k - r)));

        fit = fitness(next, problem);
        ++result.iterations;
        result.fitness_trace.push_back(fit);
        const bool fixed_point = next == labels;
        labels = std::move(next);
        if (fixed_point) break;
    }

    result.support = support_of(labels);
    result.fitness_final = fit;
    result.converged = fit <= eps;
    return result;
}

}  // namespace jsr
