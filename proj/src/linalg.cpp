#include "jsr/linalg.hpp"

#include <string>

#include "jsr/errors.hpp"

namespace jsr {

namespace {

void require_finite(const Matrix& m, const char* what) {
    if (!m.allFinite()) {
        throw InvalidInputError(std::string(what) + ": non-finite entries");
    }
}

void require_rows(const SubspaceBasis& basis, const Matrix& m, const char* what) {
    if (m.rows() != basis.ambient_dim()) {
        throw InvalidInputError(std::string(what) + ": matrix has " + std::to_string(m.rows()) +
                                " rows, basis ambient dimension is " +
                                std::to_string(basis.ambient_dim()));
    }
}

// First nonzero entry of each column made nonnegative, so bases are
// reproducible across runs.
void normalize_signs(Matrix& u) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
            const double v = u(i, j);
            if (v != 0.0) {
                if (v < 0.0) u.col(j) = -u.col(j);
                break;
            }
        }
    }
}

}  // namespace

SubspaceBasis::SubspaceBasis(Matrix basis) : basis_(std::move(basis)) {
    require_finite(basis_, "SubspaceBasis");
    if (basis_.rows() < 1) {
        throw InvalidInputError("SubspaceBasis: ambient dimension must be at least 1");
    }
    if (basis_.cols() > basis_.rows()) {
        throw InvalidInputError("SubspaceBasis: dim exceeds ambient dimension");
    }
    if (basis_.cols() > 0) {
        const Matrix gram = basis_.transpose() * basis_;
        const double deviation =
            (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
        if (deviation > 1e-10) {
            throw InvalidInputError("SubspaceBasis: columns not orthonormal (deviation " +
                                    std::to_string(deviation) + ")");
        }
    }
}

SubspaceBasis SubspaceBasis::trivial(Eigen::Index ambient) {
    return SubspaceBasis(Matrix(ambient, 0));
}

Eigen::Index numerical_rank(const Matrix& m, double rel_tol) {
    require_finite(m, "numerical_rank");
    if (rel_tol <= 0.0 || rel_tol >= 1.0) {
        throw InvalidInputError("numerical_rank: rel_tol must lie in (0, 1)");
    }
    const Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
    const double cutoff = rel_tol * sigma(0);
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
    return rank;
}

SubspaceBasis orthonormal_basis(const Matrix& m, Eigen::Index d, double rel_tol) {
    require_finite(m, "orthonormal_basis");
    if (d < 1 || d > std::min(m.rows(), m.cols())) {
        throw InvalidInputError("orthonormal_basis: d out of range");
    }
    const Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const Vector& sigma = svd.singularValues();
    if (sigma(0) == 0.0 || sigma(d - 1) <= rel_tol * sigma(0)) {
        throw RankDeficiencyError("orthonormal_basis: requested dimension " + std::to_string(d) +
                                  " exceeds numerical rank");
    }
    Matrix u = svd.matrixU().leftCols(d);
    normalize_signs(u);
    return SubspaceBasis(std::move(u));
}

Matrix project(const SubspaceBasis& basis, const Matrix& m) {
    require_finite(m, "project");
    require_rows(basis, m, "project");
    if (basis.dim() == 0) return Matrix::Zero(m.rows(), m.cols());
    return basis.matrix() * (basis.matrix().transpose() * m);
}

Matrix complement_project(const SubspaceBasis& basis, const Matrix& m) {
    require_finite(m, "complement_project");
    require_rows(basis, m, "complement_project");
    if (basis.dim() == 0) return m;
    return m - basis.matrix() * (basis.matrix().transpose() * m);
}

Matrix least_squares(const Matrix& b, const Matrix& y, double rel_tol) {
    require_finite(b, "least_squares");
    require_finite(y, "least_squares");
    if (b.rows() != y.rows()) {
        throw InvalidInputError("least_squares: row counts differ");
    }
    const Eigen::JacobiSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sigma = svd.singularValues();
    Vector inv = Vector::Zero(sigma.size());
    if (sigma.size() > 0 && sigma(0) > 0.0) {
        const double cutoff = rel_tol * sigma(0);
        for (Eigen::Index i = 0; i < sigma.size(); ++i) {
            if (sigma(i) > cutoff) inv(i) = 1.0 / sigma(i);
        }
    }
    return svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * y);
}

}  // namespace jsr
