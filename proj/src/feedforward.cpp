#include "mdr/feedforward.hpp"

#include <string>

#include "mdr/errors.hpp"

namespace mdr {

namespace {

void check_horizon(const RiccatiSolution& riccati, const SystemModel& model, std::span<const Vector> d) {
    if (d.size() != riccati.horizon + 1)
        throw DimensionError("disturbance sequence has " + std::to_string(d.size()) + " samples, horizon needs " +
                             std::to_string(riccati.horizon + 1));
    if (riccati.P.size() != riccati.horizon + 2 || riccati.Upsilon_inv.size() != riccati.horizon + 1)
        throw DimensionError("Riccati solution is incomplete");
    for (const auto& dk : d)
        if (dk.size() != model.disturbance_dim()) throw DimensionError("disturbance sample has wrong dimension");
}

}  // namespace

ClosedFormTerms closed_form_terms(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost) {
    const std::size_t N = riccati.horizon;
    const Matrix& A = model.A;
    const Matrix& B = model.B;
    const Matrix& E = model.E;
    ClosedFormTerms t;
    t.H.resize(N + 1);
    t.Abar.resize(N + 1);
    t.F.resize(N + 1);
    t.Rscript.resize(N + 2);
    for (std::size_t k = 0; k <= N; ++k) {
        const Matrix& P_next = riccati.P[k + 1];
        t.H[k] = B.transpose() * (cost.R + P_next) * E;
        t.Abar[k] = A - B * riccati.K[k];
        t.F[k] = (t.Abar[k].transpose() * P_next - riccati.M[k].transpose() * riccati.Upsilon_inv[k] * B.transpose() * cost.R) * E;
    }
    t.Rscript[N + 1] = riccati.P[N + 1];
    for (std::size_t k = N + 1; k-- > 0;) t.Rscript[k] = t.Abar[k].transpose() * t.Rscript[k + 1] + cost.Q;
    return t;
}

FeedforwardSolution solve_recursive(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost,
                                    std::span<const Vector> d) {
    require_consistent(model, cost);
    check_horizon(riccati, model, d);
    const std::size_t N = riccati.horizon;
    const Matrix& A = model.A;
    const Matrix& B = model.B;
    const Matrix& E = model.E;
    const Vector Qr = cost.Q * cost.r;

    FeedforwardSolution ff;
    ff.h.resize(N + 1);
    ff.f.resize(N + 2);
    ff.f[N + 1] = -riccati.P[N + 1] * cost.r;
    for (std::size_t k = N + 1; k-- > 0;) {
        const Matrix& P_next = riccati.P[k + 1];
        const Vector Ed = E * d[k];
        ff.h[k] = B.transpose() * ((cost.R + P_next) * Ed + ff.f[k + 1]);
        ff.f[k] = A.transpose() * (P_next * Ed + ff.f[k + 1]) -
                  riccati.M[k].transpose() * (riccati.Upsilon_inv[k] * ff.h[k]) - Qr;
    }
    return ff;
}

FeedforwardSolution solve_recursive(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost,
                                    const DisturbanceProfile& d) {
    const auto seq = sample_sequence(d, 0, static_cast<std::int64_t>(riccati.horizon) + 1);
    return solve_recursive(riccati, model, cost, seq);
}

FeedforwardSolution solve_closed_form(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost,
                                      std::span<const Vector> d) {
    require_consistent(model, cost);
    check_horizon(riccati, model, d);
    const std::size_t N = riccati.horizon;
    const auto n = model.n();
    const ClosedFormTerms t = closed_form_terms(riccati, model, cost);

    // sum_{s=first}^{N} Abar_first' ... Abar_{s-1}' F_s d_s, with the empty product equal to I.
    auto propagated_sum = [&](std::size_t first) {
        Vector acc = Vector::Zero(n);
        Matrix transport = Matrix::Identity(n, n);
        for (std::size_t s = first; s <= N; ++s) {
            acc += transport * (t.F[s] * d[s]);
            transport = transport * t.Abar[s].transpose();
        }
        return acc;
    };

    FeedforwardSolution ff;
    ff.h.resize(N + 1);
    ff.f.resize(N + 2);
    ff.f[N + 1] = -t.Rscript[N + 1] * cost.r;
    for (std::size_t k = 0; k <= N; ++k) {
        ff.f[k] = propagated_sum(k) - t.Rscript[k] * cost.r;
        ff.h[k] = t.H[k] * d[k] + model.B.transpose() * (propagated_sum(k + 1) - t.Rscript[k + 1] * cost.r);
    }
    return ff;
}

FeedforwardSolution solve_closed_form(const RiccatiSolution& riccati, const SystemModel& model, const CostSpec& cost,
                                      const DisturbanceProfile& d) {
    const auto seq = sample_sequence(d, 0, static_cast<std::int64_t>(riccati.horizon) + 1);
    return solve_closed_form(riccati, model, cost, seq);
}

SteadyFeedforward solve_steady(const GareSolution& gare, const SystemModel& model, const CostSpec& cost,
                               const Vector& d_limit) {
    require_consistent(model, cost);
    if (d_limit.size() != model.disturbance_dim()) throw DimensionError("d_limit has wrong dimension");
    const auto n = model.n();
    const Matrix& B = model.B;
    const Matrix Abar = model.A - B * gare.K;
    const double radius = linalg::spectral_radius(Abar);
    if (!(radius < 1.0)) throw StabilizationError(radius);

    const Matrix F = (Abar.transpose() * gare.P - gare.M.transpose() * gare.Upsilon_inv * B.transpose() * cost.R) * model.E;
    const Matrix lhs = Matrix::Identity(n, n) - Abar.transpose();
    SteadyFeedforward out;
    out.f = lhs.partialPivLu().solve(F * d_limit - cost.Q * cost.r);
    out.h = B.transpose() * ((cost.R + gare.P) * (model.E * d_limit) + out.f);
    return out;
}

}  // namespace mdr
