#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "mdr/model.hpp"

namespace mdr {

/// A fully specified finite-horizon problem with a materialized disturbance sequence.
struct ProblemInstance {
    SystemModel model;
    CostSpec cost;
    Vector x0;
    std::vector<Vector> d;  // d_0 .. d_N
    std::size_t N = 0;
};

struct InstanceOptions {
    Eigen::Index max_n = 4;
    Eigen::Index max_m = 2;
    std::size_t max_N = 20;
    double min_radius = 0.3;
    double max_radius = 1.2;
    double min_upsilon_eigenvalue = 1e-6;
    int max_attempts = 1000;
};

/// Draws instances until every Upsilon_k of the strict Riccati sweep has min eigenvalue above
/// `min_upsilon_eigenvalue`. A is Gaussian rescaled to a spectral radius in [min_radius, max_radius];
/// Q = c_o'c_o and R = D'D with Gaussian c_o, D.
ProblemInstance random_instance(std::mt19937_64& rng, const InstanceOptions& options = {});

/// Per-index generator so that instance i is the same regardless of evaluation order.
std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace mdr
