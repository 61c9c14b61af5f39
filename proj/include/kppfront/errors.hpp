#pragma once

#include <stdexcept>
#include <string>

namespace kppfront {

/// Invalid input: parameters outside their admissible range, misaligned
/// grids, mismatched profiles. The CLI maps these to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Evaluation outside the analyticity strip of a characteristic function.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A numeric procedure failed to produce a trustworthy answer (bracket
/// failure, singular system, non-convergence). The CLI maps these to exit 1.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kppfront
