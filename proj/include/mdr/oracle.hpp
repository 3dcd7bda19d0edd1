#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mdr/model.hpp"

namespace mdr {

/// Independent references used to cross-check the Riccati/feedforward path. Neither
/// routine touches riccati.hpp or feedforward.hpp.

struct OracleResult {
    Vector u_opt;       // stacked u_0 .. u_N
    double J_opt = 0.0;
    double condition = 0.0;  // eigenvalue ratio of the normal matrix
};

inline constexpr std::size_t kOracleMaxUnknowns = 2000;

/// Writes every x_k as an affine function of the stacked input vector, forms the exact
/// quadratic cost and solves its normal equations. `d` holds d_0 .. d_N.
/// Throws NonUniqueError when the normal matrix is singular.
OracleResult brute_force_optimal(const SystemModel& model, const CostSpec& cost, const Vector& x0,
                                 std::span<const Vector> d, std::size_t N);

/// Textbook finite-horizon LQR gains for sum x'Qx + u'R_u u + x_{N+1}'P x_{N+1}:
///   K = (R_u + B'PB)^{-1} B'PA,   P <- Q + K'R_uK + (A - BK)'P(A - BK).
std::vector<Matrix> textbook_lqr_gains(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R_u,
                                       const Matrix& P_terminal, std::size_t N);

}  // namespace mdr
