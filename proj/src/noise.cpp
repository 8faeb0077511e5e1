#include "jsr/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jsr/errors.hpp"

namespace jsr {

NoisyEstimate estimate_signal_subspace(const MmvMatrix& y_noisy,
                                       std::optional<double> noise_sigma) {
    if (y_noisy.squared_norm() == 0.0) {
        throw InvalidInputError("estimate_signal_subspace: Y is zero");
    }
    if (noise_sigma && *noise_sigma < 0.0) {
        throw InvalidInputError("estimate_signal_subspace: noise_sigma must be nonnegative");
    }

    const Eigen::JacobiSVD<Matrix> svd(y_noisy.matrix());
    const Vector& sigma = svd.singularValues();
    std::vector<double> values(sigma.data(), sigma.data() + sigma.size());
    const double numeric_floor = kDefaultRankTol * values.front();

    int rank = 0;
    if (noise_sigma) {
        const double max_dim =
            static_cast<double>(std::max(y_noisy.rows(), y_noisy.sample_count()));
        const double bar = std::max(2.0 * *noise_sigma * std::sqrt(max_dim), numeric_floor);
        while (rank < static_cast<int>(values.size()) &&
               values[static_cast<std::size_t>(rank)] > bar) {
            ++rank;
        }
        if (rank == 0) {
            throw NoSignalError(
                "estimate_signal_subspace: no singular value above the noise floor");
        }
    } else {
        // Largest-gap rule over the numerically nonzero leading values; a
        // zero (or numerically zero) tail makes the gap at the true rank
        // effectively infinite, so noiseless inputs recover numerical_rank.
        int nonzero = 0;
        while (nonzero < static_cast<int>(values.size()) &&
               values[static_cast<std::size_t>(nonzero)] > numeric_floor) {
            ++nonzero;
        }
        const int limit = std::min(nonzero, static_cast<int>(values.size()) - 1);
        rank = 1;
        double best_ratio = -1.0;
        for (int i = 0; i < limit; ++i) {
            const double next = values[static_cast<std::size_t>(i) + 1];
            const double ratio = next > 0.0 ? values[static_cast<std::size_t>(i)] / next
                                            : std::numeric_limits<double>::infinity();
            if (ratio > best_ratio) {
                best_ratio = ratio;
                rank = i + 1;
            }
        }
    }

    return NoisyEstimate{rank, orthonormal_basis(y_noisy.matrix(), rank),
                         std::move(values)};
}

SolveResult ss_music_noisy(const JsrProblem& problem, const SsMusicConfig& config,
                           std::optional<double> noise_sigma) {
    const NoisyEstimate estimate = estimate_signal_subspace(problem.mmv, noise_sigma);
    const int r = std::min(estimate.rank_estimate, problem.row_sparsity);
    const SubspaceBasis signal = r == estimate.rank_estimate
                                     ? estimate.signal_basis
                                     : orthonormal_basis(problem.mmv.matrix(), r);

    double epsilon;
    if (config.epsilon) {
        epsilon = *config.epsilon;
    } else {
        const double m = static_cast<double>(problem.mmv.rows());
        const double samples = static_cast<double>(problem.mmv.sample_count());
        double sigma_sq = 0.0;
        if (noise_sigma) {
            sigma_sq = *noise_sigma * *noise_sigma;
        } else if (estimate.rank_estimate < static_cast<int>(estimate.singular_values.size()) &&
                   estimate.rank_estimate < m) {
            // Average the residual spectrum energy over the noise-only block.
            double tail = 0.0;
            for (std::size_t i = static_cast<std::size_t>(estimate.rank_estimate);
                 i < estimate.singular_values.size(); ++i) {
                tail += estimate.singular_values[i] * estimate.singular_values[i];
            }
            sigma_sq = tail / ((m - estimate.rank_estimate) * samples);
        }
        epsilon = std::max(config.noise_epsilon_factor * m * samples * sigma_sq,
                           noiseless_epsilon(problem.mmv));
    }

    return detail::ss_music_loop(problem, config, signal, epsilon);
}

}  // namespace jsr
