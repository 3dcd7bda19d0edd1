#pragma once

#include <cstddef>
#include <vector>

#include "mdr/model.hpp"

namespace mdr {

/// Backward Riccati sweep over k = 0..N.
///
///   Upsilon_k = B'(R + P_{k+1})B
///   M_k       = B' P_{k+1} A
///   P_k       = Q + A' P_{k+1} A - M_k' Upsilon_k^{-1} M_k
///
/// In strict mode Upsilon_k must be positive definite and Upsilon_inv holds its inverse;
/// otherwise Upsilon_inv holds the SVD pseudo-inverse and the regular condition
/// Upsilon_k Upsilon_k^+ M_k = M_k is enforced instead.
struct RiccatiSolution {
    std::size_t horizon = 0;
    bool strict = true;
    std::vector<Matrix> P;            // P_0 .. P_{N+1}
    std::vector<Matrix> Upsilon;      // Upsilon_0 .. Upsilon_N
    std::vector<Matrix> M;            // M_0 .. M_N
    std::vector<Matrix> K;            // K_k = Upsilon_inv_k M_k
    std::vector<Matrix> Upsilon_inv;  // Upsilon_k^{-1} or Upsilon_k^+
    std::vector<bool> regular;
};

inline constexpr double kPositiveDefiniteFloor = 1e-10;
inline constexpr double kRegularityTol = 1e-9;

RiccatiSolution solve_finite_horizon(const SystemModel& model, const CostSpec& cost, std::size_t N, bool strict = true);

/// True iff ||Upsilon Upsilon^+ M - M||_max <= tol (1 + ||M||_max).
bool check_regularity(const Matrix& Upsilon, const Matrix& M, double tol = kRegularityTol);

struct GareOptions {
    double tol = 1e-12;
    std::size_t max_iters = 100000;
    bool require_stabilizing = true;  // throw StabilizationError when rho(A - BK) >= 1
};

/// Stationary solution of P = Q + A'PA - M' Upsilon^+ M obtained by iterating from P = 0.
struct GareSolution {
    Matrix P;
    Matrix Upsilon;
    Matrix M;
    Matrix K;
    Matrix Upsilon_inv;  // pseudo-inverse
    double closed_loop_radius = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool detectable = false;  // (A, Q^1/2) detectable; false means the result is not certified
};

/// One application of the GARE map P -> Q + A'PA - M'Upsilon^+M.
Matrix gare_map(const SystemModel& model, const CostSpec& cost, const Matrix& P);

/// Throws ConvergenceError, StabilizationError or RegularityError.
GareSolution solve_gare(const SystemModel& model, const CostSpec& cost, const GareOptions& options = {});

}  // namespace mdr
