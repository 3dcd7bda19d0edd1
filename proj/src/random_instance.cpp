#include "mdr/random_instance.hpp"

#include "mdr/errors.hpp"
#include "mdr/riccati.hpp"

namespace mdr {

namespace {

Matrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix out(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
    return out;
}

template <typename Int>
Int uniform_int(std::mt19937_64& rng, Int lo, Int hi) {
    return std::uniform_int_distribution<Int>(lo, hi)(rng);
}

bool strictly_solvable(const ProblemInstance& inst, double floor) {
    try {
        const auto sol = solve_finite_horizon(inst.model, inst.cost, inst.N, true);
        for (const auto& U : sol.Upsilon)
            if (linalg::min_eigenvalue_sym(U) < floor) return false;
        return true;
    } catch (const SolverError&) {
        return false;
    }
}

}  // namespace

std::mt19937_64 instance_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

ProblemInstance random_instance(std::mt19937_64& rng, const InstanceOptions& options) {
    std::uniform_real_distribution<double> radius_dist(options.min_radius, options.max_radius);
    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        ProblemInstance inst;
        const auto n = uniform_int<Eigen::Index>(rng, 1, options.max_n);
        const auto m = uniform_int<Eigen::Index>(rng, 1, std::min(options.max_m, n));
        const auto l = uniform_int<Eigen::Index>(rng, 1, n);
        inst.N = uniform_int<std::size_t>(rng, 0, options.max_N);

        Matrix A = gaussian(rng, n, n);
        const double rho = linalg::spectral_radius(A);
        if (rho < 1e-8) continue;
        A *= radius_dist(rng) / rho;

        inst.model = SystemModel{A, gaussian(rng, n, m), gaussian(rng, n, m), gaussian(rng, l, n)};
        const Matrix D = gaussian(rng, n, n);
        const Matrix G = gaussian(rng, n, n);
        inst.cost = CostSpec::from_selector(inst.model, D.transpose() * D, G.transpose() * G, gaussian(rng, n, 1));
        inst.x0 = gaussian(rng, n, 1);
        inst.d.reserve(inst.N + 1);
        for (std::size_t k = 0; k <= inst.N; ++k) inst.d.push_back(gaussian(rng, m, 1));

        if (strictly_solvable(inst, options.min_upsilon_eigenvalue)) return inst;
    }
    throw SolverError("random_instance: no strictly solvable draw within the attempt budget");
}

}  // namespace mdr
