#pragma once

#include <Eigen/Dense>

namespace mdr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Relative cutoff used by `pinv`: singular values below this times sigma_max are dropped.
inline constexpr double kPinvCutoff = 1e-10;

/// Moore-Penrose pseudo-inverse via SVD.
Matrix pinv(const Matrix& a, double relative_cutoff = kPinvCutoff);

/// Numerical rank: singular values above `relative_tol * sigma_max`.
Eigen::Index rank(const Matrix& a, double relative_tol);

/// Smallest eigenvalue of the symmetric part of `a`.
double min_eigenvalue_sym(const Matrix& a);

double spectral_radius(const Matrix& a);

/// (a + a') / 2
Matrix symmetrize(const Matrix& a);

/// Principal square root of a symmetric PSD matrix; negative eigenvalues are clamped to zero.
Matrix sqrt_psd(const Matrix& a);

/// Max absolute entry; zero for empty matrices.
double max_abs(const Matrix& a);

bool all_finite(const Matrix& a);

}  // namespace linalg
}  // namespace mdr
