#include "mdr/oracle.hpp"

#include <Eigen/Eigenvalues>

#include "mdr/errors.hpp"

namespace mdr {

OracleResult brute_force_optimal(const SystemModel& model, const CostSpec& cost, const Vector& x0,
                                 std::span<const Vector> d, std::size_t N) {
    require_consistent(model, cost);
    if (d.size() != N + 1) throw DimensionError("oracle: disturbance sequence must hold N + 1 samples");
    const auto n = model.n();
    const auto m = model.m();
    const auto unknowns = static_cast<Eigen::Index>((N + 1) * static_cast<std::size_t>(m));
    if (static_cast<std::size_t>(unknowns) > kOracleMaxUnknowns) throw DomainError("oracle: problem too large for a dense solve");

    // x_k = Gx[k] U + x_free[k]
    std::vector<Matrix> Gx(N + 2, Matrix::Zero(n, unknowns));
    std::vector<Vector> x_free(N + 2);
    x_free[0] = x0;
    for (std::size_t k = 0; k <= N; ++k) {
        Gx[k + 1] = model.A * Gx[k];
        Gx[k + 1].middleCols(static_cast<Eigen::Index>(k) * m, m) += model.B;
        x_free[k + 1] = model.A * x_free[k] + model.E * d[k];
    }

    // J(U) = U'HU + 2g'U + const
    Matrix H = Matrix::Zero(unknowns, unknowns);
    Vector g = Vector::Zero(unknowns);
    for (std::size_t k = 0; k <= N; ++k) {
        const Vector ex = x_free[k] - cost.r;
        H += Gx[k].transpose() * cost.Q * Gx[k];
        g += Gx[k].transpose() * cost.Q * ex;

        // B u_k + E d_k = Sel_k U + E d_k
        Matrix sel = Matrix::Zero(n, unknowns);
        sel.middleCols(static_cast<Eigen::Index>(k) * m, m) = model.B;
        H += sel.transpose() * cost.R * sel;
        g += sel.transpose() * cost.R * (model.E * d[k]);
    }
    const Vector e_terminal = x_free[N + 1] - cost.r;
    H += Gx[N + 1].transpose() * cost.P_terminal * Gx[N + 1];
    g += Gx[N + 1].transpose() * cost.P_terminal * e_terminal;
    H = 0.5 * (H + H.transpose());

    Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    OracleResult out;
    out.condition = lo > 0.0 ? hi / lo : INFINITY;
    if (!(lo > 1e-14 * std::max(hi, 1.0))) throw NonUniqueError(out.condition);

    out.u_opt = H.ldlt().solve(-g);

    // Cost of the minimizer by direct forward simulation.
    Vector x = x0;
    double J = 0.0;
    for (std::size_t k = 0; k <= N; ++k) {
        const Vector u = out.u_opt.segment(static_cast<Eigen::Index>(k) * m, m);
        const Vector w = model.B * u + model.E * d[k];
        const Vector e = x - cost.r;
        J += e.dot(cost.Q * e) + w.dot(cost.R * w);
        x = model.A * x + w;
    }
    const Vector e = x - cost.r;
    out.J_opt = J + e.dot(cost.P_terminal * e);
    return out;
}

std::vector<Matrix> textbook_lqr_gains(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R_u,
                                       const Matrix& P_terminal, std::size_t N) {
    std::vector<Matrix> K(N + 1);
    Matrix P = P_terminal;
    for (std::size_t i = N + 1; i-- > 0;) {
        const Matrix S = R_u + B.transpose() * P * B;
        K[i] = S.fullPivLu().solve(B.transpose() * P * A);
        const Matrix Acl = A - B * K[i];
        P = Q + K[i].transpose() * R_u * K[i] + Acl.transpose() * P * Acl;
        P = 0.5 * (P + P.transpose());
    }
    return K;
}

}  // namespace mdr
