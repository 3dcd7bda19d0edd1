#include "mdr/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "mdr/errors.hpp"
#include "mdr/report.hpp"
#include "mdr/riccati.hpp"
#include "mdr/scenario.hpp"
#include "mdr/sim.hpp"
#include "mdr/sweep.hpp"

namespace mdr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

json echo_scenario(const Scenario& s) {
    json e;
    e["system"] = {{"A", matrix_to_json(s.model.A)},
                   {"B", matrix_to_json(s.model.B)},
                   {"E", matrix_to_json(s.model.E)},
                   {"c_o", matrix_to_json(s.model.c_o)}};
    if (s.continuous) {
        e["continuous"] = {{"A", matrix_to_json(s.continuous->A)},
                           {"B", matrix_to_json(s.continuous->B)},
                           {"E", matrix_to_json(s.continuous->E)},
                           {"sample_time", s.sample_time}};
    }
    e["cost"] = {{"Q", matrix_to_json(s.cost.Q)},
                 {"R", matrix_to_json(s.cost.R)},
                 {"P_terminal", matrix_to_json(s.cost.P_terminal)},
                 {"r", vector_to_json(s.cost.r)}};
    e["x0"] = vector_to_json(s.x0);
    e["metadata"] = s.metadata;
    return e;
}

std::string print_matrix(const Matrix& m) {
    std::ostringstream os;
    os << std::setprecision(10);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << "  [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j);
        os << "]\n";
    }
    return os.str();
}

}  // namespace

fs::path resolve_out_dir(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
    return fs::current_path();
}

int run(const fs::path& scenario_path, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_scenario(scenario_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }

    const std::size_t count = scenario.controllers.size();
    std::vector<std::optional<Trajectory>> trajectories(count);
    std::vector<ControllerSummary> summaries(count);

    // Controllers are independent; each writes only its own slot.
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(count); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const ControllerConfig& config = scenario.controllers[idx];
        try {
            trajectories[idx] = simulate(scenario.model, scenario.cost, config, scenario.x0, scenario.steps, scenario.disturbance);
            summaries[idx] = summarize_trajectory(*trajectories[idx], scenario, config);
        } catch (const std::exception& e) {
            ControllerSummary failed;
            failed.name = config.name;
            failed.kind = to_string(config.kind);
            failed.error = e.what();
            failed.error_kind = dynamic_cast<const SolverError*>(&e) ? "solver" : "validation";
            summaries[idx] = std::move(failed);
        }
    }

    int code = kOk;
    for (const auto& s : summaries) {
        if (s.ok) continue;
        err << "controller '" << s.name << "' failed: " << s.error << '\n';
        code = std::max(code, s.error_kind == "solver" ? int{kSolverError} : int{kValidationError});
    }

    auto wants = [&](const char* what) {
        return std::find(scenario.outputs.begin(), scenario.outputs.end(), what) != scenario.outputs.end();
    };
    try {
        fs::create_directories(out_dir);
        std::vector<std::pair<std::string, const Trajectory*>> runs;
        for (std::size_t i = 0; i < count; ++i) {
            if (!trajectories[i]) continue;
            runs.emplace_back(scenario.controllers[i].name, &*trajectories[i]);
            if (wants("csv")) {
                const fs::path p = out_dir / (scenario.name + "." + scenario.controllers[i].name + ".csv");
                write_file(p, trajectory_csv(*trajectories[i]));
                out << "wrote " << p.string() << '\n';
            }
        }
        if (wants("svg") && !runs.empty()) {
            const fs::path p = out_dir / (scenario.name + ".svg");
            write_file(p, overlay_svg(scenario, runs));
            out << "wrote " << p.string() << '\n';
        }
        if (wants("summary")) {
            RunSummary summary;
            summary.scenario = scenario.name;
            summary.steps = scenario.steps;
            summary.onset = scenario.disturbance.start_step;
            summary.settling_band = scenario.settling_band;
            summary.controllers = summaries;
            summary.echo = echo_scenario(scenario);
            const fs::path p = out_dir / (scenario.name + ".summary.json");
            write_file(p, summary_to_json(summary).dump(2) + "\n");
            out << "wrote " << p.string() << '\n';
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }
    return code;
}

int compare(const std::vector<fs::path>& summary_paths, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
    try {
        std::vector<RunSummary> summaries;
        for (const auto& p : summary_paths) {
            std::ifstream in(p);
            if (!in) throw ValidationError("cannot open summary " + p.string());
            json j;
            try {
                j = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ValidationError(p.string() + ": " + e.what());
            }
            summaries.push_back(summary_from_json(j));
        }
        const ComparisonTable table = compare_summaries(summaries);
        out << table.text;
        fs::create_directories(out_dir);
        const fs::path csv = out_dir / (summaries.front().scenario + ".comparison.csv");
        write_file(csv, table.csv);
        out << "wrote " << csv.string() << '\n';
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }
}

int gare(const fs::path& scenario_path, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_scenario(scenario_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }
    const ValidationReport report = validate(scenario.model, scenario.cost);
    if (!report.detectable) err << "warning: (A, Q^1/2) is not detectable; the stationary solution is not certified\n";

    GareOptions options;
    for (const auto& c : scenario.controllers)
        if (c.kind == ControllerKind::Stationary) options = c.gare;
    options.require_stabilizing = false;

    GareSolution g;
    try {
        g = solve_gare(scenario.model, scenario.cost, options);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        out << "converged: no\nlast residual: " << e.last_residual() << '\n';
        return kSolverError;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return kSolverError;
    }
    const bool stabilizing = g.closed_loop_radius < 1.0;
    out << std::setprecision(10);
    out << "scenario: " << scenario.name << '\n';
    out << "P =\n" << print_matrix(g.P);
    out << "K =\n" << print_matrix(g.K);
    out << "spectral radius of A - BK: " << g.closed_loop_radius << '\n';
    out << "residual: " << g.residual << '\n';
    out << "iterations: " << g.iterations << '\n';
    out << "detectable: " << (report.detectable ? "yes" : "no") << '\n';
    out << "disturbance: " << to_string(report.disturbance_class) << '\n';
    out << "stabilizing: " << (stabilizing ? "yes" : "no") << '\n';
    out << "certified: " << (report.detectable && stabilizing ? "yes" : "no") << '\n';
    if (!stabilizing) err << "warning: the converged solution does not stabilize A - BK\n";
    return kOk;
}

int selftest(std::size_t count, std::uint64_t seed, std::ostream& out, std::ostream& err) {
    SweepOptions options;
    options.count = count;
    options.seed = seed;
    const auto checks = run_sweep(options, Execution::Parallel);
    const SweepMaxima m = summarize(checks);

    struct Line {
        const char* name;
        double value;
        double limit;
    };
    const Line lines[] = {
        {"input sequence vs brute-force minimizer (relative)", m.input_error, 1e-8},
        {"simulated / predicted / brute-force cost (relative)", m.cost_triangle, 1e-8},
        {"stationarity residual", m.stationarity, 1e-8},
        {"costate link residual", m.costate_link, 1e-8},
        {"closed form vs recursion", m.closed_form_error, 1e-9},
        {"gains vs textbook LQR", m.lqr_gain_error, 1e-10},
    };
    bool pass = m.failures == 0;
    out << "selftest: " << checks.size() << " random instances (seed " << seed << "), worst oracle condition "
        << std::setprecision(3) << m.worst_condition << '\n';
    for (const auto& l : lines) {
        const bool ok = l.value <= l.limit;
        pass = pass && ok;
        out << (ok ? "PASS " : "FAIL ") << l.name << ": " << std::setprecision(3) << l.value << " (limit " << l.limit << ")\n";
    }
    if (m.failures) {
        err << m.failures << " instance(s) threw:\n";
        for (const auto& c : checks)
            if (!c.failure.empty()) err << "  #" << c.index << ": " << c.failure << '\n';
    }
    return pass ? kOk : kSolverError;
}

}  // namespace mdr::cli
