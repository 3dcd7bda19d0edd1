#include "mdr/sim.hpp"

#include <algorithm>
#include <string>

namespace mdr {

SimulationError::SimulationError(std::int64_t step, const std::string& cause)
    : SolverError("controller failed at step " + std::to_string(step) + ": " + cause), step_(step) {}

double stage_cost(const SystemModel& model, const CostSpec& cost, const Vector& x, const Vector& u, const Vector& d) {
    const Vector e = x - cost.r;
    const Vector w = model.B * u + model.E * d;
    return e.dot(cost.Q * e) + w.dot(cost.R * w);
}

Trajectory rollout(const SystemModel& model, const CostSpec& cost, const Vector& x0, std::span<const Vector> d,
                   const Policy& policy) {
    require_consistent(model, cost);
    if (x0.size() != model.n()) throw DimensionError("x0 has wrong dimension");
    Trajectory t;
    t.steps = static_cast<std::int64_t>(d.size());
    t.x.reserve(d.size() + 1);
    t.z.reserve(d.size() + 1);
    t.u.reserve(d.size());
    t.cost_cum.reserve(d.size());
    t.d.assign(d.begin(), d.end());

    t.x.push_back(x0);
    t.z.push_back(model.c_o * x0);
    double running = 0.0;
    for (std::int64_t k = 0; k < t.steps; ++k) {
        const Vector& xk = t.x.back();
        const Vector& dk = d[static_cast<std::size_t>(k)];
        Vector uk;
        try {
            uk = policy(k, xk, dk);
        } catch (const Error& e) {
            throw SimulationError(k, e.what());
        }
        if (uk.size() != model.m()) throw SimulationError(k, "policy returned an input of wrong dimension");
        running += stage_cost(model, cost, xk, uk, dk);
        Vector next = model.A * xk + model.B * uk + model.E * dk;
        t.u.push_back(std::move(uk));
        t.cost_cum.push_back(running);
        t.z.push_back(model.c_o * next);
        t.x.push_back(std::move(next));
    }
    return t;
}

Trajectory simulate(const SystemModel& model, const CostSpec& cost, const ControllerConfig& config, const Vector& x0,
                    std::int64_t steps, const DisturbanceProfile& profile) {
    require_consistent(model, cost);
    if (steps < 1) throw ValidationError("simulation needs steps >= 1");
    if (profile.dim() != model.disturbance_dim()) throw DimensionError("disturbance profile has wrong dimension");
    validate_config(config, model);
    const auto d = sample_sequence(profile, 0, steps);

    switch (config.kind) {
        case ControllerKind::FiniteHorizon: {
            const std::size_t N = config.horizon.value_or(static_cast<std::size_t>(steps - 1));
            if (static_cast<std::size_t>(steps) > N + 1)
                throw ValidationError("controller '" + config.name + "': " + std::to_string(steps) +
                                      " steps exceed the finite horizon N + 1 = " + std::to_string(N + 1));
            const RiccatiSolution riccati = solve_finite_horizon(model, cost, N, config.strict);
            const FeedforwardSolution ff = solve_recursive(riccati, model, cost, profile);
            return rollout(model, cost, x0, d, [&](std::int64_t k, const Vector& x, const Vector&) {
                return finite_horizon_control(static_cast<std::size_t>(k), x, riccati, ff);
            });
        }
        case ControllerKind::Stationary: {
            const GareSolution gare = solve_gare(model, cost, config.gare);
            // Without preview the stationary law compensates the current sample as if it persisted.
            return rollout(model, cost, x0, d, [&](std::int64_t, const Vector& x, const Vector& dk) {
                return stationary_control(x, gare, solve_steady(gare, model, cost, dk).h);
            });
        }
        case ControllerKind::RecedingHorizon: {
            const std::size_t T = *config.horizon;
            return rollout(model, cost, x0, d, [&](std::int64_t, const Vector& x, const Vector& dk) {
                return receding_horizon_control(x, dk, model, cost, T);
            });
        }
        case ControllerKind::StateFeedbackCompensation:
            return rollout(model, cost, x0, d, [&](std::int64_t, const Vector& x, const Vector& dk) {
                return sfc_control(x, dk, config.k_x, config.K_d);
            });
        case ControllerKind::PID: {
            ControllerState state = ControllerState::zeros(model.l());
            const Vector z_ref = model.c_o * cost.r;
            return rollout(model, cost, x0, d, [&](std::int64_t, const Vector& x, const Vector&) {
                PidOutput out = pid_control(state, z_ref - model.c_o * x, config.sample_time, config.pid);
                state = std::move(out.state);
                return out.u;
            });
        }
    }
    throw ValidationError("unknown controller kind");
}

double evaluate_cost(const Trajectory& traj, const SystemModel& model, const CostSpec& cost) {
    if (traj.x.size() != static_cast<std::size_t>(traj.steps) + 1 || traj.u.size() != static_cast<std::size_t>(traj.steps) ||
        traj.d.size() != static_cast<std::size_t>(traj.steps))
        throw DimensionError("trajectory lengths are inconsistent");
    double J = 0.0;
    for (std::size_t k = 0; k < traj.u.size(); ++k) J += stage_cost(model, cost, traj.x[k], traj.u[k], traj.d[k]);
    const Vector e = traj.x.back() - cost.r;
    return J + e.dot(cost.P_terminal * e);
}

double predicted_optimal_cost(const RiccatiSolution& riccati, const FeedforwardSolution& ff, const Vector& x0,
                              const SystemModel& model, const CostSpec& cost, std::span<const Vector> d) {
    const std::size_t N = riccati.horizon;
    if (d.size() != N + 1 || ff.h.size() != N + 1 || ff.f.size() != N + 2)
        throw DimensionError("predicted_optimal_cost: horizon mismatch");
    const Vector& r = cost.r;
    double J = x0.dot(riccati.P[0] * x0) + 2.0 * x0.dot(ff.f[0]) + r.dot(riccati.P[N + 1] * r);
    const double rQr = r.dot(cost.Q * r);
    for (std::size_t k = 0; k <= N; ++k) {
        const Vector Ed = model.E * d[k];
        J += rQr + Ed.dot((cost.R + riccati.P[k + 1]) * Ed) + 2.0 * Ed.dot(ff.f[k + 1]) -
             ff.h[k].dot(riccati.Upsilon_inv[k] * ff.h[k]);
    }
    return J;
}

CostateResiduals costate_residuals(const Trajectory& traj, const RiccatiSolution& riccati, const FeedforwardSolution& ff,
                                   const SystemModel& model, const CostSpec& cost) {
    const std::size_t N = riccati.horizon;
    if (traj.u.size() != N + 1 || traj.x.size() != N + 2)
        throw DimensionError("costate_residuals: trajectory must cover the Riccati horizon");
    const Matrix& B = model.B;
    const Matrix BtR = B.transpose() * cost.R;

    CostateResiduals res;
    // lambda holds lambda_k while walking k = N, N-1, ..., 0.
    Vector lambda = riccati.P[N + 1] * (traj.x[N + 1] - cost.r);
    res.costate_link = (lambda - riccati.P[N + 1] * traj.x[N + 1] - ff.f[N + 1]).norm();
    for (std::size_t k = N + 1; k-- > 0;) {
        const Vector stationarity = BtR * (B * traj.u[k]) + B.transpose() * lambda + BtR * (model.E * traj.d[k]);
        res.stationarity = std::max(res.stationarity, stationarity.norm());
        const Vector previous = cost.Q * (traj.x[k] - cost.r) + model.A.transpose() * lambda;  // lambda_{k-1}
        res.costate_link = std::max(res.costate_link, (previous - riccati.P[k] * traj.x[k] - ff.f[k]).norm());
        lambda = previous;
    }
    return res;
}

}  // namespace mdr
