#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlfb {

enum class ErrorKind {
    InvalidParameter,
    Shape,
    Domain,
    Regime,
    Precondition,
    Convergence,
    Resolution,
    NoRoot,
    SearchRange,
    DegenerateDomain,
    NumericalBlowup,
    Stability,
    SolverFailure,
    LinearAlgebra,
    Inconclusive,
    Parse,
    Validation,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Base error for everything the library throws. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Power iteration gave up before reaching tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& message, double last_residual, int iterations)
        : Error(ErrorKind::Convergence, message),
          last_residual_(last_residual),
          iterations_(iterations) {}

    double last_residual() const noexcept { return last_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_residual_;
    int iterations_;
};

}  // namespace nlfb
