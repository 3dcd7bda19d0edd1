#include "mdr/riccati.hpp"

#include <cmath>

#include "mdr/errors.hpp"

namespace mdr {

namespace {

struct Step {
    Matrix P;
    Matrix Upsilon;
    Matrix M;
    Matrix K;
    Matrix Upsilon_inv;
    bool regular = true;
    double min_eigenvalue = 0.0;
};

Step riccati_step(const SystemModel& model, const CostSpec& cost, const Matrix& P_next, bool strict) {
    const Matrix& A = model.A;
    const Matrix& B = model.B;
    Step s;
    s.Upsilon = linalg::symmetrize(B.transpose() * (cost.R + P_next) * B);
    s.M = B.transpose() * P_next * A;
    if (strict) {
        s.min_eigenvalue = linalg::min_eigenvalue_sym(s.Upsilon);
        if (!(s.min_eigenvalue > kPositiveDefiniteFloor)) return s;
        s.Upsilon_inv = s.Upsilon.llt().solve(Matrix::Identity(s.Upsilon.rows(), s.Upsilon.cols()));
        s.Upsilon_inv = linalg::symmetrize(s.Upsilon_inv);
    } else {
        s.Upsilon_inv = linalg::pinv(s.Upsilon);
        s.regular = check_regularity(s.Upsilon, s.M);
    }
    s.K = s.Upsilon_inv * s.M;
    s.P = linalg::symmetrize(cost.Q + A.transpose() * P_next * A - s.M.transpose() * s.K);
    return s;
}

}  // namespace

bool check_regularity(const Matrix& Upsilon, const Matrix& M, double tol) {
    if (Upsilon.rows() != Upsilon.cols() || M.rows() != Upsilon.rows())
        throw DimensionError("check_regularity: Upsilon must be m x m and M must be m x n");
    const Matrix residual = Upsilon * linalg::pinv(Upsilon) * M - M;
    return linalg::max_abs(residual) <= tol * (1.0 + linalg::max_abs(M));
}

RiccatiSolution solve_finite_horizon(const SystemModel& model, const CostSpec& cost, std::size_t N, bool strict) {
    require_consistent(model, cost);
    RiccatiSolution sol;
    sol.horizon = N;
    sol.strict = strict;
    sol.P.resize(N + 2);
    sol.Upsilon.resize(N + 1);
    sol.M.resize(N + 1);
    sol.K.resize(N + 1);
    sol.Upsilon_inv.resize(N + 1);
    sol.regular.assign(N + 1, true);

    sol.P[N + 1] = linalg::symmetrize(cost.P_terminal);
    for (std::size_t i = N + 1; i-- > 0;) {
        Step s = riccati_step(model, cost, sol.P[i + 1], strict);
        if (strict && s.P.size() == 0) throw SolvabilityError(i, s.min_eigenvalue);
        if (!s.regular) {
            const Matrix residual = s.Upsilon * s.Upsilon_inv * s.M - s.M;
            throw RegularityError(i, linalg::max_abs(residual));
        }
        sol.P[i] = std::move(s.P);
        sol.Upsilon[i] = std::move(s.Upsilon);
        sol.M[i] = std::move(s.M);
        sol.K[i] = std::move(s.K);
        sol.Upsilon_inv[i] = std::move(s.Upsilon_inv);
        sol.regular[i] = s.regular;
    }
    return sol;
}

Matrix gare_map(const SystemModel& model, const CostSpec& cost, const Matrix& P) {
    return riccati_step(model, cost, P, false).P;
}

GareSolution solve_gare(const SystemModel& model, const CostSpec& cost, const GareOptions& options) {
    require_consistent(model, cost);
    if (!(options.tol > 0.0)) throw DomainError("GARE tolerance must be positive");

    const auto n = model.n();
    Matrix P = Matrix::Zero(n, n);
    double change = INFINITY;
    std::size_t iter = 0;
    while (iter < options.max_iters) {
        Matrix next = gare_map(model, cost, P);
        change = linalg::max_abs(next - P);
        P = std::move(next);
        ++iter;
        if (!std::isfinite(change)) break;
        if (change <= options.tol) break;
    }
    if (!(change <= options.tol)) throw ConvergenceError(iter, change);

    Step s = riccati_step(model, cost, P, false);
    if (!s.regular) {
        throw RegularityError(iter, linalg::max_abs(s.Upsilon * s.Upsilon_inv * s.M - s.M));
    }
    GareSolution g;
    g.residual = linalg::max_abs(P - s.P);
    g.P = std::move(P);
    g.Upsilon = std::move(s.Upsilon);
    g.M = std::move(s.M);
    g.K = std::move(s.K);
    g.Upsilon_inv = std::move(s.Upsilon_inv);
    g.iterations = iter;
    g.closed_loop_radius = linalg::spectral_radius(model.A - model.B * g.K);
    g.detectable = check_detectability(model.A, cost.Q);
    if (options.require_stabilizing && !(g.closed_loop_radius < 1.0)) throw StabilizationError(g.closed_loop_radius);
    return g;
}

}  // namespace mdr
