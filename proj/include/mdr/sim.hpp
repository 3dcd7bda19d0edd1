#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mdr/control.hpp"
#include "mdr/errors.hpp"
#include "mdr/feedforward.hpp"
#include "mdr/model.hpp"
#include "mdr/riccati.hpp"

namespace mdr {

struct Trajectory {
    std::int64_t steps = 0;
    std::vector<Vector> x;         // x_0 .. x_steps
    std::vector<Vector> u;         // u_0 .. u_{steps-1}
    std::vector<Vector> d;         // d_0 .. d_{steps-1}
    std::vector<Vector> z;         // c_o x_k, k = 0 .. steps
    std::vector<double> cost_cum;  // running sum of stage costs through step k
};

/// A controller failed during a rollout; `step()` is the step whose input could not be computed.
class SimulationError : public SolverError {
public:
    SimulationError(std::int64_t step, const std::string& cause);
    std::int64_t step() const noexcept { return step_; }

private:
    std::int64_t step_;
};

using Policy = std::function<Vector(std::int64_t k, const Vector& x, const Vector& d)>;

/// Forward rollout of x_{k+1} = A x_k + B u_k + E d_k under an arbitrary policy.
Trajectory rollout(const SystemModel& model, const CostSpec& cost, const Vector& x0, std::span<const Vector> d,
                   const Policy& policy);

/// Builds the controller described by `config` (Riccati, GARE and feedforward solves included)
/// and rolls it out for `steps` steps.
Trajectory simulate(const SystemModel& model, const CostSpec& cost, const ControllerConfig& config, const Vector& x0,
                    std::int64_t steps, const DisturbanceProfile& d);

double stage_cost(const SystemModel& model, const CostSpec& cost, const Vector& x, const Vector& u, const Vector& d);

/// Sum of stage costs over the trajectory plus (x_steps - r)' P_terminal (x_steps - r).
double evaluate_cost(const Trajectory& traj, const SystemModel& model, const CostSpec& cost);

/// Optimal value of the finite-horizon problem from the Riccati and feedforward solutions alone:
/// x0'P_0x0 + 2x0'f_0 + r'P_{N+1}r + sum_k [r'Qr + d_k'E'(R+P_{k+1})Ed_k + 2d_k'E'f_{k+1} - h_k'Upsilon_k^{-1}h_k].
double predicted_optimal_cost(const RiccatiSolution& riccati, const FeedforwardSolution& ff, const Vector& x0,
                              const SystemModel& model, const CostSpec& cost, std::span<const Vector> d);

struct CostateResiduals {
    double stationarity = 0.0;  // max_k ||B'RB u_k + B' lambda_k + B'RE d_k||
    double costate_link = 0.0;  // max_k ||lambda_{k-1} - P_k x_k - f_k||
};

/// Rebuilds lambda backwards from lambda_N = P_{N+1}(x_{N+1} - r) and measures how well the
/// trajectory satisfies the first-order optimality conditions. `traj` must span the full horizon.
CostateResiduals costate_residuals(const Trajectory& traj, const RiccatiSolution& riccati, const FeedforwardSolution& ff,
                                   const SystemModel& model, const CostSpec& cost);

}  // namespace mdr
