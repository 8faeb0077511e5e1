#include "jsr/model.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "jsr/errors.hpp"

namespace jsr {

AtomSet::AtomSet(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 0) {
            throw InvalidInputError("AtomSet: negative atom index");
        }
        if (i > 0 && indices_[i] == indices_[i - 1]) {
            throw InvalidInputError("AtomSet: duplicate atom index " +
                                    std::to_string(indices_[i]));
        }
    }
}

bool AtomSet::contains(int atom) const {
    return std::binary_search(indices_.begin(), indices_.end(), atom);
}

AtomSet AtomSet::unioned(const AtomSet& other) const {
    std::vector<int> merged;
    merged.reserve(indices_.size() + other.indices_.size());
    std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(),
                   other.indices_.end(), std::back_inserter(merged));
    AtomSet result;
    result.indices_ = std::move(merged);
    return result;
}

int LabelConfig::positive_count() const {
    return static_cast<int>(std::count(labels.begin(), labels.end(), std::uint8_t{1}));
}

AtomSet support_of(const LabelConfig& labels) {
    std::vector<int> indices;
    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        if (labels.labels[i]) indices.push_back(static_cast<int>(i));
    }
    return AtomSet(std::move(indices));
}

LabelConfig labels_of(const AtomSet& atoms, int n) {
    LabelConfig config;
    config.labels.assign(static_cast<std::size_t>(n), 0);
    for (int atom : atoms.indices()) {
        if (atom >= n) {
            throw InvalidInputError("labels_of: atom index " + std::to_string(atom) +
                                    " out of range for n = " + std::to_string(n));
        }
        config.labels[static_cast<std::size_t>(atom)] = 1;
    }
    return config;
}

Dictionary::Dictionary(Matrix atoms) : matrix_(std::move(atoms)) {
    if (!matrix_.allFinite()) {
        throw InvalidInputError("Dictionary: non-finite entries");
    }
    if (matrix_.cols() < 2) {
        throw InvalidInputError("Dictionary: need at least 2 atoms");
    }
    if (matrix_.rows() < 1) {
        throw InvalidInputError("Dictionary: need at least 1 row");
    }
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
        const double norm = matrix_.col(j).norm();
        if (norm == 0.0) {
            throw InvalidInputError("Dictionary: atom " + std::to_string(j) + " is zero");
        }
        matrix_.col(j) /= norm;
    }
}

Matrix Dictionary::columns(const AtomSet& atoms) const {
    Matrix sub(matrix_.rows(), atoms.size());
    int j = 0;
    for (int atom : atoms.indices()) {
        if (atom >= matrix_.cols()) {
            throw InvalidInputError("Dictionary::columns: atom index out of range");
        }
        sub.col(j++) = matrix_.col(atom);
    }
    return sub;
}

MmvMatrix::MmvMatrix(Matrix samples) : matrix_(std::move(samples)) {
    if (!matrix_.allFinite()) {
        throw InvalidInputError("MmvMatrix: non-finite entries");
    }
    if (matrix_.cols() < 1 || matrix_.rows() < 1) {
        throw InvalidInputError("MmvMatrix: need at least one row and one sample");
    }
}

JsrProblem::JsrProblem(Dictionary dict, MmvMatrix samples, int k,
                       std::optional<AtomSet> truth)
    : dictionary(std::move(dict)), mmv(std::move(samples)), row_sparsity(k),
      true_support(std::move(truth)) {
    if (mmv.rows() != dictionary.rows()) {
        throw InvalidInputError("JsrProblem: dictionary and MMV row counts differ");
    }
    if (row_sparsity < 1 || row_sparsity >= dictionary.atom_count()) {
        throw InvalidInputError("JsrProblem: row sparsity must satisfy 1 <= K < n");
    }
    if (true_support && true_support->size() != row_sparsity) {
        throw InvalidInputError("JsrProblem: true support size differs from K");
    }
}

double fitness(const AtomSet& positives, const JsrProblem& problem) {
    if (positives.empty()) return problem.mmv.squared_norm();
    const Matrix selected = problem.dictionary.columns(positives);
    const Eigen::Index rank = numerical_rank(selected);
    if (rank == 0) return problem.mmv.squared_norm();
    const SubspaceBasis basis = orthonormal_basis(selected, rank);
    return complement_project(basis, problem.mmv.matrix()).squaredNorm();
}

double fitness(const LabelConfig& labels, const JsrProblem& problem) {
    if (static_cast<Eigen::Index>(labels.labels.size()) != problem.dictionary.atom_count()) {
        throw InvalidInputError("fitness: label vector length differs from atom count");
    }
    return fitness(support_of(labels), problem);
}

LabelConfig nsc_classify(const Dictionary& dictionary, const AtomSet& query,
                         const SubspaceBasis& basis, int k,
                         const AtomSet& forced_positive) {
    if (basis.ambient_dim() != dictionary.rows()) {
        throw InvalidInputError("nsc_classify: basis ambient dimension differs from m");
    }
    if (k < forced_positive.size()) {
        throw InvalidInputError("nsc_classify: k smaller than forced positive count");
    }
    const int n = static_cast<int>(dictionary.atom_count());
    LabelConfig labels = labels_of(forced_positive, n);

    const int remaining = k - forced_positive.size();
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(query.indices().size());
    for (int atom : query.indices()) {
        if (atom >= n) {
            throw InvalidInputError("nsc_classify: query atom out of range");
        }
        if (forced_positive.contains(atom)) continue;
        const Matrix residual =
            complement_project(basis, dictionary.atom(atom));
        ranked.emplace_back(residual.norm(), atom);
    }
    if (static_cast<int>(ranked.size()) < remaining) {
        throw InvalidInputError("nsc_classify: fewer than k candidates available");
    }
    std::sort(ranked.begin(), ranked.end());
    for (int i = 0; i < remaining; ++i) {
        labels.labels[static_cast<std::size_t>(ranked[static_cast<std::size_t>(i)].second)] = 1;
    }
    return labels;
}

double noiseless_epsilon(const MmvMatrix& mmv, double rel) {
    return rel * mmv.squared_norm();
}

AtomSet all_atoms(const Dictionary& dictionary) {
    std::vector<int> indices(static_cast<std::size_t>(dictionary.atom_count()));
    std::iota(indices.begin(), indices.end(), 0);
    return AtomSet(std::move(indices));
}

}  // namespace jsr
