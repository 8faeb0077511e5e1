#pragma once

#include <optional>

#include "jsr/ss_music.hpp"

namespace jsr {

/// Simultaneous OMP: K greedy steps, each picking the atom whose correlation
/// row with the current residual matrix has the largest l2 norm, followed by
/// a least-squares refit on the selected set. iterations == K.
SolveResult somp(const JsrProblem& problem);

/// Simultaneous CoSaMP with row-norm proxies: merge the running support with
/// the min(2K, n) atoms of largest correlation row norm, least-squares fit,
/// prune to the K largest solution-row norms, refit the residual. Stops when
/// the residual energy falls to `epsilon` (default: the noiseless threshold),
/// when an accepted step would increase the residual (the previous state is
/// kept and the step is discarded), at a support fixed point, or at t_max.
SolveResult scosamp(const JsrProblem& problem, int t_max = 100,
                    std::optional<double> epsilon = std::nullopt);

/// Rank-aware ORMP: holds the r-dimensional signal basis U of Y fixed and
/// greedily picks the atom maximizing ||U^T a~|| / ||a~||, where a~ is the
/// atom deflated against the span of the already selected atoms. Atoms whose
/// deflated norm is numerically zero are excluded from the ranking.
/// iterations == K.
SolveResult ra_ormp(const JsrProblem& problem, int r);

/// Subspace-augmented MUSIC: stage 1 selects K - r atoms by SOMP-style greedy
/// steps against the least-squares residual; stage 2 classifies all atoms
/// against span([U_Y | stage-1 atoms]) with the stage-1 atoms forced positive.
/// iterations == K - r by construction (0 when r == K, where it is MUSIC).
SolveResult sa_music(const JsrProblem& problem, int r);

/// Test hook: run only stage 2 of sa_music with the given stage-1 atoms
/// (|stage1| must equal K - r).
SolveResult sa_music_with_stage1(const JsrProblem& problem, int r, const AtomSet& stage1);

/// Iterative MUSIC with the fixed K - r candidate budget. Initialization runs
/// K - r SOMP steps (counted as iterations) and one augmented classification
/// (one more iteration). Each refinement body then classifies the currently
/// negative atoms against span([U_Y | A_T]) to grow a 2K - r candidate set,
/// least-squares fits it, and keeps the K largest solution rows directly as
/// the new label configuration; the top K - r of those rows become the next
/// training set T. Terminates on fitness <= epsilon, a label fixed point, or
/// t_max total iterations.
SolveResult imusic(const JsrProblem& problem, const SsMusicConfig& config = {});

}  // namespace jsr
