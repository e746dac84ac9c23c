#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grounded {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An iterative method hit its iteration cap before reaching tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what + " (last residual " + std::to_string(last_residual) + ")"),
          last_residual_(last_residual) {}
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// Non-finite values appeared during a numerical routine.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A size or range guard rejected the request (k out of range, dense cap, C(n,k) cap, ...).
class GuardError : public Error {
public:
    using Error::Error;
};

}  // namespace grounded
