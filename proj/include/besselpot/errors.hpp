#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace besselpot {

// Base of every error raised by the library. The CLI maps the subclasses
// onto process exit codes (see tools/besselpot.cpp).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (alpha <= 0, p < 1, u <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Kernel evaluated at the origin where it diverges (alpha <= n).
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved_error) : Error(what), achieved_error_(achieved_error) {}
    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// Reflection plane not on the half-grid.
class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Grid functions or operators defined on different grids.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A hypothesis of an operation does not hold (e.g. q <= max{beta, n(beta-1)/alpha}).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Norm ratio requested for a vanishing input.
class UndefinedRatioError : public Error {
public:
    using Error::Error;
};

/// O(N^2) oracle refused because the grid exceeds its point budget.
class CostGuardError : public Error {
public:
    using Error::Error;
};

class AmbiguousCenterError : public Error {
public:
    AmbiguousCenterError(const std::string& what, std::vector<std::vector<double>> candidates)
        : Error(what), candidates_(std::move(candidates)) {}
    const std::vector<std::vector<double>>& candidates() const noexcept { return candidates_; }

private:
    std::vector<std::vector<double>> candidates_;
};

/// Malformed run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent grid-function file.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace besselpot
