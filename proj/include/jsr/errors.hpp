#pragma once

#include <stdexcept>
#include <string>

namespace jsr {

/// Malformed or out-of-contract input (dimension mismatch, non-finite entries, ...).
class InvalidInputError : public std::invalid_argument {
public:
    explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested more subspace dimensions than the data supports.
class RankDeficiencyError : public std::runtime_error {
public:
    explicit RankDeficiencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Solver reached a state that is impossible in exact arithmetic
/// (typically a numerically zero residual while labels are still unfitted).
class DegenerateStateError : public std::runtime_error {
public:
    explicit DegenerateStateError(const std::string& what) : std::runtime_error(what) {}
};

/// Noisy-subspace estimation found no singular value above the noise floor.
class NoSignalError : public std::runtime_error {
public:
    explicit NoSignalError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid run configuration (CLI flags, config file, experiment grids).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace jsr
