#pragma once

#include <stdexcept>
#include <string>

namespace clab {

/// Base class for every error raised by the library. The CLI maps
/// `ValidationError` subclasses to exit status 1 and everything else to 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Non-finite or malformed input values.
class InputDomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A documented precondition was violated (e.g. a point outside D).
class PreconditionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Bad configuration: unknown keys, out-of-range parameters, too few samples.
class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// The requested operation is not available for this domain or measure.
class CapabilityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A numerical procedure failed to converge or left its working region.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Kernel series tail bound exceeded the requested tolerance.
class TruncationError : public NumericError {
public:
    TruncationError(const std::string& what, int degree, double tail_bound)
        : NumericError(what), degree_(degree), tail_bound_(tail_bound) {}
    int degree() const noexcept { return degree_; }
    double tail_bound() const noexcept { return tail_bound_; }

private:
    int degree_;
    double tail_bound_;
};

/// A finite search (candidate list, sample budget) was exhausted.
class ResourceError : public Error {
public:
    using Error::Error;
};

}  // namespace clab
