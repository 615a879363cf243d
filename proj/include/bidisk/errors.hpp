#ifndef BIDISK_ERRORS_HPP
#define BIDISK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bidisk {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the open disk / bidisk, or a malformed point set.
struct DomainError : Error {
    using Error::Error;
};

/// Matrix fails a positivity requirement. Carries the offending eigenvalue.
struct NotPsdError : Error {
    double eigenvalue;
    NotPsdError(const std::string& what, double eig)
        : Error(what), eigenvalue(eig) {}
};

/// Gram matrices of a domain/codomain vector family do not match, so no
/// isometry can map one family to the other.
struct NotIsometricError : Error {
    double mismatch;
    NotIsometricError(const std::string& what, double m)
        : Error(what), mismatch(m) {}
};

/// Eigensolver failed to converge within its sweep budget.
struct ConvergenceError : Error {
    double off_diagonal_norm;
    ConvergenceError(const std::string& what, double off)
        : Error(what), off_diagonal_norm(off) {}
};

/// NaN/Inf appeared, a linear solve broke down, or similar numeric failure.
struct NumericError : Error {
    using Error::Error;
};

/// A certificate is too inaccurate to support the requested construction.
struct CertificateInconsistent : Error {
    using Error::Error;
};

} // namespace bidisk

#endif
