#pragma once

#include <Eigen/Dense>

namespace jsr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative singular-value cutoff shared by rank decisions and the
/// pseudo-inverse, so both agree on what counts as numerically zero.
inline constexpr double kDefaultRankTol = 1e-10;

/// An orthonormal basis U of a subspace of R^m, carrying the projector U*U^T.
/// dim() == 0 encodes the trivial subspace {0}.
class SubspaceBasis {
public:
    /// Wraps an m x d matrix whose columns must already be orthonormal
    /// (max-norm deviation of U^T*U from I at most 1e-10).
    explicit SubspaceBasis(Matrix basis);

    /// The subspace {0} inside R^ambient.
    static SubspaceBasis trivial(Eigen::Index ambient);

    Eigen::Index ambient_dim() const { return basis_.rows(); }
    Eigen::Index dim() const { return basis_.cols(); }
    const Matrix& matrix() const { return basis_; }

private:
    Matrix basis_;
};

/// Number of singular values above rel_tol * sigma_max; 0 for the zero matrix.
/// rel_tol must lie in (0, 1). Throws InvalidInputError on non-finite entries.
Eigen::Index numerical_rank(const Matrix& m, double rel_tol = kDefaultRankTol);

/// The d leading left singular vectors of m, sign-normalized so the first
/// nonzero entry of each column is nonnegative. Throws RankDeficiencyError
/// when d exceeds the numerical rank.
SubspaceBasis orthonormal_basis(const Matrix& m, Eigen::Index d,
                                double rel_tol = kDefaultRankTol);

/// Orthogonal projection U*(U^T*m) onto the subspace.
Matrix project(const SubspaceBasis& basis, const Matrix& m);

/// Residual m - U*(U^T*m); the projection onto the orthogonal complement.
Matrix complement_project(const SubspaceBasis& basis, const Matrix& m);

/// Minimum-F-norm solution of min ||y - b*x||_F via the truncated-SVD
/// pseudo-inverse; singular values below rel_tol * sigma_max are dropped.
Matrix least_squares(const Matrix& b, const Matrix& y,
                     double rel_tol = kDefaultRankTol);

}  // namespace jsr
