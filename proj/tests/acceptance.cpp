// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "mdr/errors.hpp"
#include "mdr/feedforward.hpp"
#include "mdr/linalg.hpp"
#include "mdr/report.hpp"
#include "mdr/scenario.hpp"
#include "mdr/sim.hpp"
#include "mdr/sweep.hpp"

using namespace mdr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

const fs::path kScenarios = fs::path(MDR_SOURCE_DIR) / "scenarios";

Trajectory run_controller(const Scenario& s, const std::string& name) {
    for (const auto& c : s.controllers)
        if (c.name == name) return simulate(s.model, s.cost, c, s.x0, s.steps, s.disturbance);
    throw ValidationError("no controller named " + name);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

const SweepMaxima& sweep() {
    static const SweepMaxima m = [] {
        SweepOptions opts;
        opts.count = 200;
        return summarize(run_sweep(opts, Execution::Parallel));
    }();
    return m;
}

Outcome oracle_equivalence() {
    const SweepMaxima& m = sweep();
    const bool pass = m.failures == 0 && m.input_error <= 1e-8 && m.cost_triangle <= 1e-8;
    return {pass, fmt("200 instances, input err %.2e, cost triangle %.2e, failures %.0f", m.input_error, m.cost_triangle,
                      static_cast<double>(m.failures))};
}

Outcome fbde_residuals() {
    const SweepMaxima& m = sweep();
    return {m.failures == 0 && m.stationarity <= 1e-8 && m.costate_link <= 1e-8,
            fmt("stationarity %.2e, costate link %.2e", m.stationarity, m.costate_link)};
}

Outcome closed_form() {
    const SweepMaxima& m = sweep();
    return {m.failures == 0 && m.closed_form_error <= 1e-9, fmt("max deviation %.2e", m.closed_form_error)};
}

Outcome lqr_reduction() {
    const SweepMaxima& m = sweep();
    return {m.failures == 0 && m.lqr_gain_error <= 1e-10, fmt("max gain deviation %.2e", m.lqr_gain_error)};
}

Outcome gare_correctness() {
    const Scenario b = load_scenario(kScenarios / "example_b.json");
    const GareSolution g = solve_gare(b.model, b.cost);
    SystemModel scalar{Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
    CostSpec unit{Matrix::Ones(1, 1), Matrix::Ones(1, 1), Matrix::Zero(1, 1), Vector::Zero(1)};
    const double golden = std::abs(solve_gare(scalar, unit).P(0, 0) - (1.0 + std::sqrt(5.0)) / 2.0);
    return {g.residual <= 1e-10 && g.closed_loop_radius < 1.0 && golden <= 1e-10,
            fmt("residual %.2e, rho %.4f, golden-ratio error %.2e", g.residual, g.closed_loop_radius, golden)};
}

Outcome matched_rejection() {
    std::mt19937_64 rng(20240607);
    std::normal_distribution<double> normal;
    auto gaussian = [&](Eigen::Index r, Eigen::Index c) {
        Matrix m(r, c);
        for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
        return m;
    };
    double worst = 0.0;
    int tried = 0;
    while (tried < 20) {
        const Eigen::Index n = 3, m = 2;
        Matrix A = gaussian(n, n);
        A *= 1.1 / linalg::spectral_radius(A);
        const Matrix B = gaussian(n, m), C = gaussian(n, n), D = gaussian(n, n);
        SystemModel model{A, B, B * gaussian(m, m), C};
        CostSpec cost{C.transpose() * C, D.transpose() * D, Matrix::Zero(n, n), Vector::Zero(n)};
        ControllerConfig cfg;
        cfg.name = "stationary";
        cfg.kind = ControllerKind::Stationary;
        Trajectory t;
        try {
            t = simulate(model, cost, cfg, gaussian(n, 1), 3000, DisturbanceProfile::constant(gaussian(m, 1)));
        } catch (const SolverError&) {
            continue;
        }
        ++tried;
        for (std::size_t k = 2900; k < 3000; ++k) worst = std::max(worst, (B * t.u[k] + model.E * t.d[k]).norm());
    }
    return {worst <= 1e-6, fmt("20 random matched systems, steady-state max ||Bu+Ed|| = %.2e", worst)};
}

Outcome example_a() {
    const Scenario s = load_scenario(kScenarios / "example_a.json");
    const Trajectory t = run_controller(s, "proposed");
    double x2 = 0.0, x1_excess = -INFINITY;
    for (std::size_t k = 900; k < t.x.size(); ++k) x2 = std::max(x2, std::abs(t.x[k](1)));
    for (std::size_t k = 0; k < t.x.size(); ++k)
        x1_excess = std::max(x1_excess, std::abs(t.x[k](0)) - std::pow(0.96, static_cast<double>(k)) * std::abs(s.x0(0)));
    return {x2 <= 1e-3 && x1_excess <= 1e-9, fmt("max|x2| for k>=900 = %.3e, max x1 excess over 0.96^k = %.1e", x2, x1_excess)};
}

Outcome example_b() {
    const Scenario s = load_scenario(kScenarios / "example_b.json");
    auto mean_x1 = [](const Trajectory& t) {
        double sum = 0.0;
        for (std::size_t k = 900; k <= 1000; ++k) sum += std::abs(t.x[k](0));
        return sum / 101.0;
    };
    const double proposed = mean_x1(run_controller(s, "proposed"));
    const double baseline = mean_x1(run_controller(s, "sfc"));
    return {proposed <= 1e-3 && proposed < baseline, fmt("mean|x1| over [900,1000]: proposed %.3e, baseline %.3e", proposed, baseline)};
}

Outcome example_c() {
    const Scenario s = load_scenario(kScenarios / "example_c.json");
    auto rms = [](const Trajectory& t) {
        double sum = 0.0;
        for (std::size_t k = 1500; k <= 2000; ++k) sum += t.z[k].squaredNorm();
        return std::sqrt(sum / 501.0);
    };
    const double proposed = rms(run_controller(s, "proposed"));
    const double baseline = rms(run_controller(s, "sfc"));
    return {proposed <= 0.25 * baseline,
            fmt("RMS z over [1500,2000]: proposed %.3e, baseline %.3e, ratio %.3f", proposed, baseline, proposed / baseline)};
}

Outcome example_d() {
    const Scenario s = load_scenario(kScenarios / "example_d.json");
    ControllerSummary summary[2];
    for (int i = 0; i < 2; ++i) {
        const ControllerConfig& c = s.controllers[static_cast<std::size_t>(i)];
        summary[i] = summarize_trajectory(simulate(s.model, s.cost, c, s.x0, s.steps, s.disturbance), s, c);
    }
    const auto settle = [](const ControllerSummary& c) { return c.settling_step.value_or(INT64_MAX); };
    const bool pass = summary[0].peak_error < summary[1].peak_error && settle(summary[0]) <= settle(summary[1]);
    return {pass, fmt("peak |dn|: proposed %.3e, PID %.3e", summary[0].peak_error, summary[1].peak_error) +
                      ", settling step: proposed " + (summary[0].settling_step ? std::to_string(*summary[0].settling_step) : "none") +
                      ", PID " + (summary[1].settling_step ? std::to_string(*summary[1].settling_step) : "none")};
}

Outcome boundedness() {
    const Scenario s = load_scenario(kScenarios / "example_b.json");
    const auto profile = DisturbanceProfile::sinusoid(Vector::Constant(1, 0.02), 1.0, 0.0, 0);
    ControllerConfig cfg;
    cfg.name = "stationary";
    cfg.kind = ControllerKind::Stationary;
    const std::int64_t steps = 10000, transient = 1000;
    const Trajectory t = simulate(s.model, s.cost, cfg, s.x0, steps, profile);
    const GareSolution g = solve_gare(s.model, s.cost);
    std::vector<double> xn, hn;
    for (std::int64_t k = transient; k < steps; ++k) {
        xn.push_back(t.x[static_cast<std::size_t>(k)].norm());
        hn.push_back(solve_steady(g, s.model, s.cost, t.d[static_cast<std::size_t>(k)]).h.norm());
    }
    const std::size_t decile = xn.size() / 10;
    auto window_max = [&](const std::vector<double>& v, std::size_t from) {
        double m = 0.0;
        for (std::size_t i = from; i < from + decile; ++i) m = std::max(m, v[i]);
        return m;
    };
    const double x_first = window_max(xn, 0), x_last = window_max(xn, xn.size() - decile);
    const double h_first = window_max(hn, 0), h_last = window_max(hn, hn.size() - decile);
    const bool finite = std::isfinite(x_first) && std::isfinite(x_last) && std::isfinite(h_first) && std::isfinite(h_last);
    const bool pass = finite && x_last <= 1.01 * x_first && h_last <= 1.01 * h_first;
    return {pass, fmt("last/first decile max: ||x|| %.4f, ||h|| %.4f", x_last / x_first, h_last / h_first)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    const Criterion criteria[] = {
        {1, "oracle equivalence", oracle_equivalence},
        {2, "optimality-condition residuals", fbde_residuals},
        {3, "closed-form feedforward", closed_form},
        {4, "LQR reduction", lqr_reduction},
        {5, "stationary Riccati solution", gare_correctness},
        {6, "matched disturbance rejection", matched_rejection},
        {7, "example A regulation", example_a},
        {8, "example B versus state-feedback baseline", example_b},
        {9, "example C versus state-feedback baseline", example_c},
        {10, "example D versus PID", example_d},
        {11, "boundedness under sinusoidal disturbance", boundedness},
    };
    int failed = 0;
    const auto start = std::chrono::steady_clock::now();
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria), secs);
    return failed == 0 ? 0 : 1;
}
