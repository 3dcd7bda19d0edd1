#include "mdr/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace mdr::linalg {

Matrix pinv(const Matrix& a, double relative_cutoff) {
    if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    const double cutoff = relative_cutoff * (s.size() > 0 ? s(0) : 0.0);
    Vector s_inv = Vector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff && s(i) > 0.0) s_inv(i) = 1.0 / s(i);
    }
    return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::Index rank(const Matrix& a, double relative_tol) {
    if (a.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    const double cutoff = relative_tol * s(0);
    return static_cast<Eigen::Index>(std::count_if(s.begin(), s.end(), [&](double v) { return v > cutoff; }));
}

double min_eigenvalue_sym(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double spectral_radius(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(a, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix symmetrize(const Matrix& a) { return 0.5 * (a + a.transpose()); }

Matrix sqrt_psd(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(a));
    Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool all_finite(const Matrix& a) { return a.allFinite(); }

}  // namespace mdr::linalg
