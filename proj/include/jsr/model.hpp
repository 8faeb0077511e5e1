#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jsr/linalg.hpp"

namespace jsr {

/// Ordered set of distinct atom indices. Indices are kept sorted ascending;
/// construction rejects duplicates and negatives.
class AtomSet {
public:
    AtomSet() = default;
    explicit AtomSet(std::vector<int> indices);

    bool empty() const { return indices_.empty(); }
    int size() const { return static_cast<int>(indices_.size()); }
    bool contains(int atom) const;
    const std::vector<int>& indices() const { return indices_; }

    AtomSet unioned(const AtomSet& other) const;

    bool operator==(const AtomSet& other) const { return indices_ == other.indices_; }

private:
    std::vector<int> indices_;
};

/// Binary label vector over the n atoms; 1 marks the positive class.
struct LabelConfig {
    std::vector<std::uint8_t> labels;

    int positive_count() const;
    bool operator==(const LabelConfig& other) const { return labels == other.labels; }
};

AtomSet support_of(const LabelConfig& labels);
LabelConfig labels_of(const AtomSet& atoms, int n);

/// The m x n measurement matrix whose columns (atoms) are the classification
/// samples. Columns are normalized to unit l2 norm at construction.
class Dictionary {
public:
    explicit Dictionary(Matrix atoms);

    Eigen::Index rows() const { return matrix_.rows(); }       // m
    Eigen::Index atom_count() const { return matrix_.cols(); } // n
    const Matrix& matrix() const { return matrix_; }
    Matrix::ConstColXpr atom(int i) const { return matrix_.col(i); }

    /// The m x |atoms| submatrix of the selected columns, in AtomSet order.
    Matrix columns(const AtomSet& atoms) const;

private:
    Matrix matrix_;
};

/// The m x N matrix of labeled measurement vectors.
class MmvMatrix {
public:
    explicit MmvMatrix(Matrix samples);

    Eigen::Index rows() const { return matrix_.rows(); }        // m
    Eigen::Index sample_count() const { return matrix_.cols(); } // N
    const Matrix& matrix() const { return matrix_; }
    double squared_norm() const { return matrix_.squaredNorm(); }

private:
    Matrix matrix_;
};

/// A joint sparse recovery instance: recover the K-row support of X from
/// Y = A*X. true_support is carried only for benchmarking.
struct JsrProblem {
    Dictionary dictionary;
    MmvMatrix mmv;
    int row_sparsity;
    std::optional<AtomSet> true_support;

    JsrProblem(Dictionary dict, MmvMatrix samples, int k,
               std::optional<AtomSet> truth = std::nullopt);
};

/// Residual energy of Y outside the span of the positively labeled atoms:
/// sum_i ||y_i - P y_i||^2. The empty positive set yields ||Y||_F^2.
/// Rank-deficient positive sets project onto their numerical-rank basis.
double fitness(const LabelConfig& labels, const JsrProblem& problem);
double fitness(const AtomSet& positives, const JsrProblem& problem);

/// Nearest-subspace classifier over the dictionary atoms. All forced_positive
/// atoms are labeled positive; the remaining k - |forced_positive| positive
/// labels go to the query atoms closest to the subspace (distance
/// ||a_i - P a_i||, ties broken by lowest index). Exactly k positives.
LabelConfig nsc_classify(const Dictionary& dictionary, const AtomSet& query,
                         const SubspaceBasis& basis, int k,
                         const AtomSet& forced_positive = AtomSet());

/// Convergence threshold for noiseless runs, relative to the MMV energy.
double noiseless_epsilon(const MmvMatrix& mmv, double rel = 1e-8);

/// Every atom index of the dictionary, as a query set.
AtomSet all_atoms(const Dictionary& dictionary);

}  // namespace jsr
