#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mdr/scenario.hpp"
#include "mdr/sim.hpp"

namespace mdr {

struct ControllerSummary {
    std::string name;
    std::string kind;
    bool ok = false;
    std::string error;       // set when the controller failed
    std::string error_kind;  // "validation" or "solver"
    double cost = 0.0;                   // J over the simulated horizon, terminal term included
    double steady_state_error = 0.0;     // mean ||z - c_o r|| over the last 10% of samples
    double peak_error = 0.0;             // max ||z - c_o r|| from disturbance onset on
    std::optional<std::int64_t> settling_step;  // first k >= onset after which the error stays in the band
    std::optional<double> closed_loop_radius;
};

struct RunSummary {
    std::string scenario;
    std::int64_t steps = 0;
    std::int64_t onset = 0;
    double settling_band = 0.0;
    std::vector<ControllerSummary> controllers;
    nlohmann::json echo = nlohmann::json::object();  // scenario data as used (system, cost, x0, metadata)
};

/// ||z_k - c_o r|| for k = 0 .. steps.
std::vector<double> regulated_error(const Trajectory& traj, const Scenario& scenario);

ControllerSummary summarize_trajectory(const Trajectory& traj, const Scenario& scenario, const ControllerConfig& config);

/// Spectral radius of the closed loop where the law is time invariant (stationary, receding
/// horizon, state feedback, PID with its integrator and derivative memory); empty otherwise.
std::optional<double> closed_loop_radius(const ControllerConfig& config, const Scenario& scenario);

/// Header k,x1..xn,u1..um,d1..dm,z1..zl,cost_cum; one row per applied input; %.17g values.
std::string trajectory_csv(const Trajectory& traj);

/// Self-contained SVG overlay of the first regulated output, one polyline per controller.
std::string overlay_svg(const Scenario& scenario, const std::vector<std::pair<std::string, const Trajectory*>>& runs);

nlohmann::json summary_to_json(const RunSummary& summary);
RunSummary summary_from_json(const nlohmann::json& j);

struct ComparisonTable {
    std::string text;
    std::string csv;
};

/// Throws ValidationError unless every summary belongs to the same scenario.
ComparisonTable compare_summaries(const std::vector<RunSummary>& summaries);

std::string format_double(double v);

}  // namespace mdr
