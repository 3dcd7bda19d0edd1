#include "mdr/errors.hpp"

#include <sstream>

namespace mdr {

namespace {

std::string describe(const char* what, double value) {
    std::ostringstream os;
    os.precision(6);
    os << what << value;
    return os.str();
}

}  // namespace

SolvabilityError::SolvabilityError(std::size_t step, double min_eigenvalue)
    : SolverError("Upsilon is not positive definite at step " + std::to_string(step) +
                  describe(" (min eigenvalue ", min_eigenvalue) + ")"),
      step_(step),
      min_eigenvalue_(min_eigenvalue) {}

RegularityError::RegularityError(std::size_t step, double residual)
    : SolverError("regular condition Upsilon Upsilon^+ M = M violated at step " + std::to_string(step) +
                  describe(" (residual ", residual) + ")"),
      step_(step),
      residual_(residual) {}

ConvergenceError::ConvergenceError(std::size_t iterations, double last_residual)
    : SolverError("Riccati iteration did not converge in " + std::to_string(iterations) +
                  describe(" iterations (last residual ", last_residual) + ")"),
      iterations_(iterations),
      last_residual_(last_residual) {}

StabilizationError::StabilizationError(double spectral_radius)
    : SolverError(describe("closed loop is not stabilizing: spectral radius ", spectral_radius)),
      spectral_radius_(spectral_radius) {}

NonUniqueError::NonUniqueError(double condition)
    : SolverError(describe("normal matrix is singular, minimizer not unique (condition ", condition) + ")"),
      condition_(condition) {}

}  // namespace mdr
