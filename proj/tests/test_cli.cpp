#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mdr/commands.hpp"
#include "mdr/errors.hpp"
#include "mdr/report.hpp"
#include "mdr/scenario.hpp"
#include "mdr/sim.hpp"
#include "support.hpp"

using namespace mdr;
using namespace mdr::test;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kScenarios = fs::path(MDR_SOURCE_DIR) / "scenarios";

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mdr_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

json small_scenario() {
    return json::parse(R"({
      "name": "toy",
      "system": {"A": [[1, 0.01], [-0.02, 0.99]], "B": [[0], [0.01]], "E": [[0.01], [0]], "c_o": [[1, 0]]},
      "cost": {"R": [[1, 0], [0, 1]]},
      "x0": [1, 0],
      "steps": 40,
      "disturbance": {"kind": "constant", "amplitude": [3], "start_step": 10},
      "controllers": [
        {"name": "opt", "kind": "finite_horizon"},
        {"name": "sfc", "kind": "state_feedback_compensation", "k_x": [[-20, -4]], "K_d": [[-5]]}
      ]
    })");
}

}  // namespace

TEST(Scenario, BundledFilesCarryStatedParameters) {
    const Scenario a = load_scenario(kScenarios / "example_a.json");
    EXPECT_EQ(a.model.A, example_a().A);
    EXPECT_EQ(a.model.B, example_a().B);
    EXPECT_EQ(a.model.E, example_a().E);
    EXPECT_EQ(a.x0, vec({1, 1, 0}));
    EXPECT_EQ(a.cost.R, Matrix::Identity(3, 3));
    EXPECT_EQ(a.cost.P_terminal, Matrix::Zero(3, 3));
    EXPECT_EQ(a.controllers.at(0).horizon, 100u);
    EXPECT_EQ(sample_disturbance(a.disturbance, 499)(0), 0.0);
    EXPECT_EQ(sample_disturbance(a.disturbance, 500)(0), 3.0);

    const Scenario b = load_scenario(kScenarios / "example_b.json");
    EXPECT_EQ(b.model.A, example_b().A);
    EXPECT_EQ(b.model.E, example_b().E);
    EXPECT_EQ(b.controllers.at(1).k_x, mat({{-20, -4}}));
    EXPECT_EQ(b.controllers.at(1).K_d, mat({{-5}}));

    const Scenario c = load_scenario(kScenarios / "example_c.json");
    EXPECT_EQ(c.model.c_o, mat({{10, 0}}));
    EXPECT_NEAR(sample_disturbance(c.disturbance, 503)(0), std::sin(3.0) / 50.0, 1e-15);

    const Scenario d = load_scenario(kScenarios / "example_d.json");
    ASSERT_TRUE(d.continuous.has_value());
    EXPECT_EQ(d.continuous->B, example_d_continuous().B);
    EXPECT_EQ(d.continuous->E, example_d_continuous().E);
    EXPECT_EQ(d.sample_time, 0.02);
    EXPECT_EQ(d.model.A, discretize_zoh(example_d_continuous(), 0.02).A);
    EXPECT_EQ(d.controllers.at(1).pid.kp, 20.0);
    EXPECT_EQ(d.controllers.at(1).pid.ki, 600.0);
    EXPECT_EQ(d.controllers.at(1).pid.kd, 0.1);
    EXPECT_EQ(d.controllers.at(1).sample_time, 0.02);
    EXPECT_EQ(d.metadata.at("operating_level_percent"), 77);
}

TEST(Scenario, RejectsUnknownFieldsWithPath) {
    json j = small_scenario();
    j["controllers"][1]["gain"] = 3;
    try {
        parse_scenario(j);
        FAIL() << "expected ScenarioError";
    } catch (const ScenarioError& e) {
        EXPECT_EQ(e.field(), "controllers[1].gain");
    }
}

TEST(Scenario, SyntaxErrorCarriesLine) {
    try {
        parse_scenario_text("{\n  \"name\": \"x\",\n  \"steps\": ,\n}");
        FAIL() << "expected ScenarioError";
    } catch (const ScenarioError& e) {
        ASSERT_TRUE(e.line().has_value());
        EXPECT_EQ(*e.line(), 3u);
    }
}

TEST(Scenario, ZeroStepsRejected) {
    json j = small_scenario();
    j["steps"] = 0;
    try {
        parse_scenario(j);
        FAIL() << "expected ScenarioError";
    } catch (const ScenarioError& e) {
        EXPECT_EQ(e.field(), "steps");
    }
}

TEST(Scenario, ShapeErrorsNamed) {
    json j = small_scenario();
    j["controllers"][1]["k_x"] = json::parse("[[1, 2, 3]]");
    EXPECT_THROW(parse_scenario(j), ScenarioError);
    j = small_scenario();
    j["x0"] = json::parse("[1]");
    EXPECT_THROW(parse_scenario(j), ScenarioError);
    j = small_scenario();
    j["cost"]["R"] = json::parse("[[1, 0], [0, -1]]");
    EXPECT_THROW(parse_scenario(j), ValidationError);
}

TEST(Scenario, RegulatedReferenceUsesSelector) {
    json j = small_scenario();
    j["reference"] = json::parse(R"({"regulated": [0.5]})");
    const Scenario s = parse_scenario(j);
    EXPECT_NEAR((s.model.c_o * s.cost.r)(0), 0.5, 1e-15);
    EXPECT_EQ(s.cost.Q, s.model.c_o.transpose() * s.model.c_o);
}

TEST(Report, CsvLayoutAndPrecision) {
    const Scenario s = parse_scenario(small_scenario());
    const Trajectory t = simulate(s.model, s.cost, s.controllers[0], s.x0, s.steps, s.disturbance);
    const std::string csv = trajectory_csv(t);
    std::istringstream in(csv);
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    EXPECT_EQ(header, "k,x1,x2,u1,d1,z1,cost_cum");
    std::vector<double> cells;
    std::stringstream row(first);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(std::stod(cell));
    ASSERT_EQ(cells.size(), 7u);
    EXPECT_EQ(cells[3], t.u[0](0));
    EXPECT_EQ(cells[6], t.cost_cum[0]);
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    EXPECT_EQ(lines, 41u);
}

TEST(Report, SummaryMetrics) {
    const Scenario s = parse_scenario(small_scenario());
    const Trajectory t = simulate(s.model, s.cost, s.controllers[0], s.x0, s.steps, s.disturbance);
    const ControllerSummary sum = summarize_trajectory(t, s, s.controllers[0]);
    const auto err = regulated_error(t, s);
    ASSERT_EQ(err.size(), 41u);
    double peak = 0.0;
    for (std::size_t k = 10; k < err.size(); ++k) peak = std::max(peak, err[k]);
    EXPECT_EQ(sum.peak_error, peak);
    EXPECT_NEAR(sum.cost, evaluate_cost(t, s.model, s.cost), 1e-12);
    EXPECT_FALSE(sum.closed_loop_radius.has_value());
    const ControllerSummary sfc = summarize_trajectory(simulate(s.model, s.cost, s.controllers[1], s.x0, s.steps, s.disturbance), s,
                                                       s.controllers[1]);
    ASSERT_TRUE(sfc.closed_loop_radius.has_value());
}

TEST(Report, SummaryJsonRoundTrip) {
    RunSummary r;
    r.scenario = "toy";
    r.steps = 40;
    r.onset = 10;
    r.settling_band = 1e-3;
    ControllerSummary c;
    c.name = "opt";
    c.kind = "finite_horizon";
    c.ok = true;
    c.cost = 0.1 + 0.2;
    c.settling_step = 17;
    r.controllers.push_back(c);
    const RunSummary back = summary_from_json(json::parse(summary_to_json(r).dump()));
    EXPECT_EQ(back.scenario, "toy");
    ASSERT_EQ(back.controllers.size(), 1u);
    EXPECT_EQ(back.controllers[0].cost, c.cost);
    EXPECT_EQ(back.controllers[0].settling_step, 17);
    EXPECT_FALSE(back.controllers[0].closed_loop_radius.has_value());
}

TEST(Report, SvgHasOnePolylinePerController) {
    const Scenario s = parse_scenario(small_scenario());
    const Trajectory a = simulate(s.model, s.cost, s.controllers[0], s.x0, s.steps, s.disturbance);
    const Trajectory b = simulate(s.model, s.cost, s.controllers[1], s.x0, s.steps, s.disturbance);
    const std::string svg = overlay_svg(s, {{"opt", &a}, {"sfc", &b}});
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos) ++count;
    EXPECT_EQ(count, 2u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Cli, OutDirPrecedence) {
    ::setenv(cli::kOutDirEnv, "/tmp/from_env", 1);
    EXPECT_EQ(cli::resolve_out_dir(std::string("/tmp/flag")), fs::path("/tmp/flag"));
    EXPECT_EQ(cli::resolve_out_dir(std::nullopt), fs::path("/tmp/from_env"));
    ::unsetenv(cli::kOutDirEnv);
    EXPECT_EQ(cli::resolve_out_dir(std::nullopt), fs::current_path());
}

TEST(Cli, RunWritesArtifactsDeterministically) {
    const fs::path dir = fresh_dir("run");
    write(dir / "toy.json", small_scenario().dump(2));
    std::ostringstream out, err;
    ASSERT_EQ(cli::run(dir / "toy.json", dir / "a", out, err), cli::kOk) << err.str();
    ASSERT_EQ(cli::run(dir / "toy.json", dir / "b", out, err), cli::kOk) << err.str();
    for (const char* f : {"toy.opt.csv", "toy.sfc.csv", "toy.svg", "toy.summary.json"}) {
        ASSERT_TRUE(fs::exists(dir / "a" / f)) << f;
        EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
    }
    fs::remove_all(dir);
}

TEST(Cli, SummaryEchoRoundTripsMatrices) {
    const fs::path dir = fresh_dir("echo");
    json j = small_scenario();
    j["system"]["A"] = json::parse("[[0.1, 0.30000000000000004], [-0.123456789012345678, 0.99]]");
    write(dir / "toy.json", j.dump(2));
    std::ostringstream out, err;
    ASSERT_EQ(cli::run(dir / "toy.json", dir, out, err), cli::kOk) << err.str();
    const json summary = json::parse(slurp(dir / "toy.summary.json"));
    const Matrix in = matrix_from_json(j["system"]["A"], "A");
    const Matrix echoed = matrix_from_json(summary.at("echo").at("system").at("A"), "A");
    EXPECT_EQ(in, echoed);
    EXPECT_EQ(matrix_from_json(summary.at("echo").at("cost").at("Q"), "Q"), mat({{1, 0}, {0, 0}}));
    fs::remove_all(dir);
}

TEST(Cli, ControllerFailureDoesNotAbortOthers) {
    const fs::path dir = fresh_dir("fail");
    json j = small_scenario();
    j["controllers"][0]["horizon"] = 5;  // shorter than the run
    write(dir / "toy.json", j.dump(2));
    std::ostringstream out, err;
    EXPECT_EQ(cli::run(dir / "toy.json", dir, out, err), cli::kValidationError);
    EXPECT_TRUE(fs::exists(dir / "toy.sfc.csv"));
    EXPECT_FALSE(fs::exists(dir / "toy.opt.csv"));
    const RunSummary s = summary_from_json(json::parse(slurp(dir / "toy.summary.json")));
    EXPECT_FALSE(s.controllers[0].ok);
    EXPECT_FALSE(s.controllers[0].error.empty());
    EXPECT_TRUE(s.controllers[1].ok);
    fs::remove_all(dir);
}

TEST(Cli, SolverFailureExitCode) {
    const fs::path dir = fresh_dir("solver");
    json j = small_scenario();
    j["cost"]["R"] = json::parse("[[0, 0], [0, 0]]");
    j["controllers"] = json::parse(R"([{"name": "rh", "kind": "receding_horizon", "horizon": 5}])");
    write(dir / "toy.json", j.dump(2));
    std::ostringstream out, err;
    EXPECT_EQ(cli::run(dir / "toy.json", dir, out, err), cli::kSolverError);
    const RunSummary s = summary_from_json(json::parse(slurp(dir / "toy.summary.json")));
    EXPECT_EQ(s.controllers[0].error_kind, "solver");
    fs::remove_all(dir);
}

TEST(Cli, InvalidScenarioExitCode) {
    const fs::path dir = fresh_dir("invalid");
    json j = small_scenario();
    j["steps"] = 0;
    write(dir / "toy.json", j.dump(2));
    std::ostringstream out, err;
    EXPECT_EQ(cli::run(dir / "toy.json", dir, out, err), cli::kValidationError);
    EXPECT_NE(err.str().find("steps"), std::string::npos);
    EXPECT_EQ(cli::run(dir / "missing.json", dir, out, err), cli::kValidationError);
    fs::remove_all(dir);
}

TEST(Cli, CompareTables) {
    const fs::path dir = fresh_dir("compare");
    std::ostringstream out, err;
    ASSERT_EQ(cli::run(kScenarios / "example_d.json", dir, out, err), cli::kOk) << err.str();
    std::ostringstream table;
    ASSERT_EQ(cli::compare({dir / "example_d.summary.json"}, dir, table, err), cli::kOk);
    EXPECT_NE(table.str().find("proposed"), std::string::npos);
    EXPECT_NE(table.str().find("pid"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir / "example_d.comparison.csv"));
    const RunSummary d = summary_from_json(json::parse(slurp(dir / "example_d.summary.json")));
    EXPECT_LT(d.controllers[0].peak_error, d.controllers[1].peak_error);

    write(dir / "toy.json", small_scenario().dump());
    ASSERT_EQ(cli::run(dir / "toy.json", dir, out, err), cli::kOk);
    RunSummary single = summary_from_json(json::parse(slurp(dir / "toy.summary.json")));
    single.controllers.resize(1);
    const ComparisonTable t = compare_summaries({single});
    std::size_t rows = 0;
    for (char ch : t.csv) rows += ch == '\n';
    EXPECT_EQ(rows, 2u);  // header plus one row

    std::ostringstream err2;
    EXPECT_EQ(cli::compare({dir / "example_d.summary.json", dir / "toy.summary.json"}, dir, table, err2), cli::kValidationError);
    EXPECT_NE(err2.str().find("different scenarios"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, GareReport) {
    std::ostringstream out, err;
    ASSERT_EQ(cli::gare(kScenarios / "example_b.json", out, err), cli::kOk);
    EXPECT_NE(out.str().find("stabilizing: yes"), std::string::npos);
    EXPECT_NE(out.str().find("disturbance: mismatched"), std::string::npos);
    EXPECT_NE(out.str().find("certified: yes"), std::string::npos);
}

TEST(Cli, GareScalarZeroDynamicsPrintsQ) {
    const fs::path dir = fresh_dir("gare0");
    write(dir / "s.json", R"({"name": "s", "system": {"A": [[0]], "B": [[1]], "E": [[1]], "c_o": [[2]]},
      "cost": {"R": [[1]]}, "x0": [0], "steps": 1, "disturbance": {"kind": "constant", "amplitude": [0]},
      "controllers": [{"kind": "stationary"}]})");
    std::ostringstream out, err;
    ASSERT_EQ(cli::gare(dir / "s.json", out, err), cli::kOk) << err.str();
    EXPECT_NE(out.str().find("P =\n  [4]"), std::string::npos) << out.str();
    fs::remove_all(dir);
}

TEST(Cli, GareFlagsUndetectableSystem) {
    const fs::path dir = fresh_dir("gare_undetectable");
    write(dir / "u.json", R"({"name": "u",
      "system": {"A": [[2, 0], [0, 0.5]], "B": [[1, 0], [0, 1]], "E": [[1, 0], [0, 1]], "c_o": [[0, 1]]},
      "cost": {"R": [[1, 0], [0, 1]]}, "x0": [0, 0], "steps": 1,
      "disturbance": {"kind": "constant", "amplitude": [0, 0]}, "controllers": [{"kind": "stationary"}]})");
    std::ostringstream out, err;
    EXPECT_EQ(cli::gare(dir / "u.json", out, err), cli::kOk);
    EXPECT_NE(err.str().find("not detectable"), std::string::npos);
    EXPECT_NE(out.str().find("certified: no"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, GareNonConvergenceIsSolverError) {
    const fs::path dir = fresh_dir("gare_cap");
    json j = json::parse(slurp(kScenarios / "example_b.json"));
    j["controllers"] = json::parse(R"([{"kind": "stationary", "gare_max_iters": 2}])");
    write(dir / "b.json", j.dump());
    std::ostringstream out, err;
    EXPECT_EQ(cli::gare(dir / "b.json", out, err), cli::kSolverError);
    EXPECT_NE(out.str().find("last residual"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, Selftest) {
    std::ostringstream out, err;
    EXPECT_EQ(cli::selftest(20, 1, out, err), cli::kOk) << out.str() << err.str();
    EXPECT_EQ(out.str().find("FAIL"), std::string::npos);
}
