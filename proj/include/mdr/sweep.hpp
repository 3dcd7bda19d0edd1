#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mdr/random_instance.hpp"

namespace mdr {

/// Cross-checks of one random instance. Errors are relative: |a - b| / max(|b|, floor) with
/// the floor documented per field.
struct InstanceCheck {
    std::size_t index = 0;
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    std::size_t N = 0;
    double condition = 0.0;
    double input_error = 0.0;           // controller rollout vs oracle minimizer, inf-norm relative
    double cost_sim_vs_predicted = 0.0; // evaluate_cost vs predicted_optimal_cost
    double cost_sim_vs_oracle = 0.0;
    double cost_predicted_vs_oracle = 0.0;
    double stationarity = 0.0;          // absolute
    double costate_link = 0.0;          // absolute
    double closed_form_error = 0.0;     // relative to max(1, |recursive|)
    double lqr_gain_error = 0.0;        // relative to max(1, |textbook gain|)
    std::string failure;                // non-empty if the instance threw
};

struct SweepOptions {
    std::uint64_t seed = 20240607;
    std::size_t count = 100;
    InstanceOptions instance;
    double max_condition = 1e8;  // redraw instances whose oracle normal matrix is worse than this
};

enum class Execution { Serial, Parallel };

/// Instance i depends only on (seed, i), so both execution modes return identical results.
std::vector<InstanceCheck> run_sweep(const SweepOptions& options, Execution execution);

InstanceCheck check_instance(const SweepOptions& options, std::size_t index);

struct SweepMaxima {
    std::size_t failures = 0;
    double input_error = 0.0;
    double cost_triangle = 0.0;
    double stationarity = 0.0;
    double costate_link = 0.0;
    double closed_form_error = 0.0;
    double lqr_gain_error = 0.0;
    double worst_condition = 0.0;
};

SweepMaxima summarize(const std::vector<InstanceCheck>& checks);

}  // namespace mdr
