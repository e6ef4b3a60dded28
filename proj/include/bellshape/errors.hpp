#pragma once

#include <stdexcept>
#include <string>

namespace bellshape {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed input data (non-increasing knots, bad tail descriptor, ...).
class StructuralError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "structural"; }
};

/// Argument outside the mathematical domain of an operation (xi = 0, n = 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// A requested order or truncation exceeds a configured cap.
class RangeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "range"; }
};

/// Precondition of an operation not met by otherwise valid data.
class PreconditionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "precondition"; }
};

/// Input is valid but outside what the implementation supports.
class Unsupported : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "unsupported"; }
};

/// Quadrature or consistency check did not reach the requested accuracy.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}
    explicit NumericalError(const std::string& what) : NumericalError(what, -1.0) {}

    const char* kind() const noexcept override { return "numerical"; }
    /// Best accuracy reached before giving up; negative when unknown.
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace bellshape
