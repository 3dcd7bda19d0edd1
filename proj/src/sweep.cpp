#include "mdr/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "mdr/control.hpp"
#include "mdr/errors.hpp"
#include "mdr/feedforward.hpp"
#include "mdr/oracle.hpp"
#include "mdr/riccati.hpp"
#include "mdr/sim.hpp"

namespace mdr {

namespace {

double relative(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

template <typename Seq>
double sequence_error(const Seq& a, const Seq& b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double scale = std::max(1.0, linalg::max_abs(b[k]));
        worst = std::max(worst, linalg::max_abs(a[k] - b[k]) / scale);
    }
    return worst;
}

}  // namespace

InstanceCheck check_instance(const SweepOptions& options, std::size_t index) {
    InstanceCheck c;
    c.index = index;
    try {
        auto rng = instance_rng(options.seed, index);
        ProblemInstance inst;
        OracleResult oracle;
        for (int attempt = 0;; ++attempt) {
            inst = random_instance(rng, options.instance);
            try {
                oracle = brute_force_optimal(inst.model, inst.cost, inst.x0, inst.d, inst.N);
                if (oracle.condition <= options.max_condition) break;
            } catch (const NonUniqueError&) {
            }
            if (attempt > 1000) throw SolverError("no well-conditioned instance found");
        }
        const auto& model = inst.model;
        const auto& cost = inst.cost;
        c.n = model.n();
        c.m = model.m();
        c.N = inst.N;
        c.condition = oracle.condition;

        const RiccatiSolution riccati = solve_finite_horizon(model, cost, inst.N, true);
        const FeedforwardSolution ff = solve_recursive(riccati, model, cost, inst.d);
        const Trajectory traj = rollout(model, cost, inst.x0, inst.d, [&](std::int64_t k, const Vector& x, const Vector&) {
            return finite_horizon_control(static_cast<std::size_t>(k), x, riccati, ff);
        });

        Vector stacked(oracle.u_opt.size());
        for (std::size_t k = 0; k < traj.u.size(); ++k) stacked.segment(static_cast<Eigen::Index>(k) * c.m, c.m) = traj.u[k];
        const double u_scale = std::max(linalg::max_abs(oracle.u_opt), 1e-300);
        c.input_error = linalg::max_abs(stacked - oracle.u_opt) / u_scale;

        const double simulated = evaluate_cost(traj, model, cost);
        const double predicted = predicted_optimal_cost(riccati, ff, inst.x0, model, cost, inst.d);
        c.cost_sim_vs_predicted = relative(simulated, predicted);
        c.cost_sim_vs_oracle = relative(simulated, oracle.J_opt);
        c.cost_predicted_vs_oracle = relative(predicted, oracle.J_opt);

        const CostateResiduals residuals = costate_residuals(traj, riccati, ff, model, cost);
        c.stationarity = residuals.stationarity;
        c.costate_link = residuals.costate_link;

        const FeedforwardSolution closed = solve_closed_form(riccati, model, cost, inst.d);
        c.closed_form_error = std::max(sequence_error(closed.h, ff.h), sequence_error(closed.f, ff.f));

        const Matrix R_u = model.B.transpose() * cost.R * model.B;
        const auto textbook = textbook_lqr_gains(model.A, model.B, cost.Q, R_u, cost.P_terminal, inst.N);
        c.lqr_gain_error = sequence_error(riccati.K, textbook);
    } catch (const std::exception& e) {
        c.failure = e.what();
    }
    return c;
}

std::vector<InstanceCheck> run_sweep(const SweepOptions& options, Execution execution) {
    std::vector<InstanceCheck> checks(options.count);
    const auto count = static_cast<long>(options.count);
    if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < count; ++i) checks[static_cast<std::size_t>(i)] = check_instance(options, static_cast<std::size_t>(i));
    } else {
        for (long i = 0; i < count; ++i) checks[static_cast<std::size_t>(i)] = check_instance(options, static_cast<std::size_t>(i));
    }
    return checks;
}

SweepMaxima summarize(const std::vector<InstanceCheck>& checks) {
    SweepMaxima s;
    for (const auto& c : checks) {
        if (!c.failure.empty()) {
            ++s.failures;
            continue;
        }
        s.input_error = std::max(s.input_error, c.input_error);
        s.cost_triangle = std::max({s.cost_triangle, c.cost_sim_vs_predicted, c.cost_sim_vs_oracle, c.cost_predicted_vs_oracle});
        s.stationarity = std::max(s.stationarity, c.stationarity);
        s.costate_link = std::max(s.costate_link, c.costate_link);
        s.closed_form_error = std::max(s.closed_form_error, c.closed_form_error);
        s.lqr_gain_error = std::max(s.lqr_gain_error, c.lqr_gain_error);
        s.worst_condition = std::max(s.worst_condition, c.condition);
    }
    return s;
}

}  // namespace mdr
