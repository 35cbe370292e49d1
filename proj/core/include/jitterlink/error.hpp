#pragma once

#include <stdexcept>
#include <string>

namespace jitterlink {

/// Input or configuration that violates a documented invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (e.g. an angle at or beyond pi/2).
class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A model fit has no admissible solution for the requested target.
class NoFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical integration failed to reach the requested tolerance.
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File input/output failure or malformed file content.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw ValidationError(message);
}

inline void require_positive(double value, const char* name) {
    if (!(value > 0.0)) throw ValidationError(std::string(name) + " must be strictly positive");
}

inline void require_non_negative(double value, const char* name) {
    if (!(value >= 0.0)) throw ValidationError(std::string(name) + " must be non-negative");
}

}  // namespace detail
}  // namespace jitterlink
