#pragma once

#include <optional>
#include <vector>

#include "jsr/ss_music.hpp"

namespace jsr {

/// Signal-subspace estimate recovered from noisy MMVs.
struct NoisyEstimate {
    int rank_estimate;
    SubspaceBasis signal_basis;            // rank_estimate leading left singular vectors
    std::vector<double> singular_values;   // all of them, descending
};

/// Estimates the signal-subspace dimension and basis of noisy MMVs.
///
/// With noise_sigma given, the rank is the number of singular values above
/// max(2 * sigma * sqrt(max(m, N)), numerical-zero cutoff); if none clears the
/// bar a NoSignalError is thrown. Without noise_sigma, the rank is the index
/// of the largest consecutive singular-value gap ratio sigma_i / sigma_{i+1}
/// (ties to the smaller rank), searched over the numerically nonzero leading
/// values. The gap rule cannot return min(m, N) itself: pass noise_sigma when
/// the signal may fill the whole space.
NoisyEstimate estimate_signal_subspace(const MmvMatrix& y_noisy,
                                       std::optional<double> noise_sigma = std::nullopt);

/// SS-MUSIC on noisy MMVs: substitutes the estimated rank and signal basis
/// for the exact ones and, unless config.epsilon is set, derives the
/// convergence threshold from the noise floor
/// (config.noise_epsilon_factor * m * N * sigma^2, floored at the noiseless
/// threshold so that zero noise reproduces ss_music exactly). When
/// noise_sigma is absent, sigma^2 is estimated from the singular values below
/// the estimated rank.
SolveResult ss_music_noisy(const JsrProblem& problem, const SsMusicConfig& config = {},
                           std::optional<double> noise_sigma = std::nullopt);

}  // namespace jsr
