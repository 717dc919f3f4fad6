#pragma once

#include <stdexcept>
#include <string>

namespace mparity {

/// Base class for every error thrown by this library.  Catch this to map
/// failures onto process exit codes in one place.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller-supplied value is outside its documented domain (bad dimension,
/// negative temperature, conflicting parameter set, malformed config key, ...).
class InvalidArgumentError : public Error {
public:
    explicit InvalidArgumentError(const std::string& what) : Error(what) {}
};

/// A state object violates a structural requirement (non-Hermitian density
/// matrix, negative eigenvalue beyond tolerance, trace drift, ...).
class InvalidStateError : public Error {
public:
    explicit InvalidStateError(const std::string& what) : Error(what) {}
};

/// The requested operation cannot be represented faithfully in the current
/// truncated Fock space.  Carries a hint for a dimension that would suffice.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, int required_dim)
        : Error(what), required_dim_(required_dim) {}

    /// Smallest basis size found to satisfy the truncation tolerance, or the
    /// largest size probed if none sufficed.
    int required_dim() const noexcept { return required_dim_; }

private:
    int required_dim_;
};

/// Post-selection (or a filter) removed all statistical weight, so the
/// requested quantity is undefined.
class EmptyDataSetError : public Error {
public:
    explicit EmptyDataSetError(const std::string& what) : Error(what) {}
};

/// An iterative scheme (time-step refinement, root bracketing, ...) failed to
/// reach its tolerance within the configured budget.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& what) : Error(what) {}
};

}  // namespace mparity
