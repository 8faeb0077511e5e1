#pragma once

#include <optional>
#include <vector>

#include "jsr/model.hpp"

namespace jsr {

/// Outcome of a solver run. `iterations` counts executed loop bodies and
/// `fitness_trace` holds one residual-energy value per body, so
/// fitness_trace.size() == iterations. converged implies the final
/// fitness is at or below the solver threshold.
struct SolveResult {
    AtomSet support;
    int iterations = 0;
    std::vector<double> fitness_trace;
    bool converged = false;
    double fitness_final = 0.0;
};

struct SsMusicConfig {
    /// Absolute convergence threshold for the fitness residual. Unset means
    /// the noiseless default noiseless_epsilon(Y) (or, on the noisy path,
    /// the noise-floor rule in ss_music_noisy).
    std::optional<double> epsilon;
    int t_max = 100;
    /// Signal-subspace dimension imposed by the caller (noisy pipeline);
    /// unset means rank(Y).
    std::optional<int> rank_override;
    /// Multiplier on the m*N*sigma^2 noise floor when the noisy path
    /// derives epsilon itself.
    double noise_epsilon_factor = 1.5;

    double resolve_epsilon(const MmvMatrix& mmv) const {
        return epsilon ? *epsilon : noiseless_epsilon(mmv);
    }
};

/// Plain MUSIC: classify all atoms against the r leading left singular
/// vectors of Y and keep the K nearest. Always reports one iteration.
SolveResult music(const JsrProblem& problem, int r,
                  std::optional<double> epsilon = std::nullopt);

/// Candidate-set construction: project Y onto the orthogonal complement of
/// the currently positive atoms, rank the remaining atoms by distance to the
/// projected signal subspace, and return current_positive plus the K - r
/// nearest. Throws DegenerateStateError when the projected MMVs are
/// numerically zero.
AtomSet candidate_step(const JsrProblem& problem, const AtomSet& current_positive,
                       int r);

/// Overcomplete selection: least-squares fit of Y on the candidate atoms,
/// then keep the `keep` candidates with largest solution-row l2 norms.
AtomSet refine_training_set(const JsrProblem& problem, const AtomSet& candidates,
                            int keep);

/// One semi-supervised classification: label all atoms against the joint
/// span of the signal basis and the training atoms, with the training atoms
/// forced positive.
LabelConfig augmented_classify(const JsrProblem& problem, const SubspaceBasis& signal,
                               const AtomSet& training);

/// The iterative semi-supervised MUSIC solver (noiseless form).
SolveResult ss_music(const JsrProblem& problem, const SsMusicConfig& config = {});

namespace detail {
/// Shared loop for the noiseless and noisy paths; `signal` is the
/// (possibly estimated) Y-signal basis used wherever U_Y appears.
SolveResult ss_music_loop(const JsrProblem& problem, const SsMusicConfig& config,
                          const SubspaceBasis& signal, double epsilon);

/// Orthonormal basis of span([U_signal | A_training]), truncated at numerical
/// rank. Shared by the augmented classifiers here and in the baselines.
SubspaceBasis augmented_basis(const JsrProblem& problem, const SubspaceBasis& signal,
                              const AtomSet& training);
}  // namespace detail

}  // namespace jsr
