#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdr {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Matrix/vector shapes disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Argument outside its mathematical domain (Ts <= 0, k out of range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent scenario/configuration data.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Raised when a numerical solve fails. The CLI maps these to exit code 2.
class SolverError : public Error {
public:
    using Error::Error;
};

/// Upsilon_k is not positive definite at `step` (strict finite-horizon mode).
class SolvabilityError : public SolverError {
public:
    SolvabilityError(std::size_t step, double min_eigenvalue);

    std::size_t step() const noexcept { return step_; }
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    std::size_t step_;
    double min_eigenvalue_;
};

/// Upsilon Upsilon^+ M != M at `step`.
class RegularityError : public SolverError {
public:
    RegularityError(std::size_t step, double residual);

    std::size_t step() const noexcept { return step_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t step_;
    double residual_;
};

class ConvergenceError : public SolverError {
public:
    ConvergenceError(std::size_t iterations, double last_residual);

    std::size_t iterations() const noexcept { return iterations_; }
    double last_residual() const noexcept { return last_residual_; }

private:
    std::size_t iterations_;
    double last_residual_;
};

/// The closed loop A - B K is not Schur stable.
class StabilizationError : public SolverError {
public:
    explicit StabilizationError(double spectral_radius);

    double spectral_radius() const noexcept { return spectral_radius_; }

private:
    double spectral_radius_;
};

/// The brute-force normal matrix is singular, so the minimizer is not unique.
class NonUniqueError : public SolverError {
public:
    explicit NonUniqueError(double condition);

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

}  // namespace mdr
