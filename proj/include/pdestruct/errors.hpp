#pragma once

#include <stdexcept>
#include <string>

namespace pdestruct {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point, stencil or window left the function's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed input: bad geometry, bad file, bad parameter.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Non-finite value met during evaluation.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Coincident arguments where distinct ones are required.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Unknown catalog identifier.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Request outside what the implementation supports (order cap, dimension cap).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A structural hypothesis checked numerically did not hold.
///
/// Carries the name of the failed check and the worst probe location.
class HypothesisViolation : public Error {
public:
    HypothesisViolation(std::string check, double worst_x, double worst_y, double worst_value,
                        const std::string& message)
        : Error(message), check_(std::move(check)), x_(worst_x), y_(worst_y), value_(worst_value)
    {
    }

    const std::string& check() const noexcept { return check_; }
    double worst_x() const noexcept { return x_; }
    double worst_y() const noexcept { return y_; }
    double worst_value() const noexcept { return value_; }

private:
    std::string check_;
    double x_;
    double y_;
    double value_;
};

} // namespace pdestruct
