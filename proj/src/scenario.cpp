#include "mdr/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "mdr/errors.hpp"

namespace mdr {

using nlohmann::json;

ScenarioError::ScenarioError(std::string field, const std::string& message, std::optional<std::size_t> line)
    : ValidationError((line ? "line " + std::to_string(*line) + ": " : std::string{}) +
                      (field.empty() ? std::string{} : field + ": ") + message),
      field_(std::move(field)),
      line_(line) {}

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known) {
    if (!obj.is_object()) throw ScenarioError(where, "expected an object");
    std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ScenarioError(where.empty() ? key : where + "." + key, "unknown field");
    }
}

std::string join(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

const json& require(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) throw ScenarioError(join(where, key), "missing required field");
    return obj.at(key);
}

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ScenarioError(field, "expected a number");
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ScenarioError(field, "expected an integer");
    return j.get<std::int64_t>();
}

std::string text(const json& j, const std::string& field) {
    if (!j.is_string()) throw ScenarioError(field, "expected a string");
    return j.get<std::string>();
}

DisturbanceProfile parse_disturbance(const json& j, Eigen::Index m) {
    const std::string where = "disturbance";
    reject_unknown(j, where, {"kind", "amplitude", "frequency", "phase", "rise_steps", "start_step", "values"});
    const std::string kind = text(require(j, where, "kind"), where + ".kind");
    const std::int64_t start = j.contains("start_step") ? integer(j.at("start_step"), where + ".start_step") : 0;
    if (start < 0) throw ScenarioError(where + ".start_step", "must be >= 0");

    auto amplitude = [&]() {
        Vector a = vector_from_json(require(j, where, "amplitude"), where + ".amplitude");
        if (a.size() != m) throw ScenarioError(where + ".amplitude", "must have " + std::to_string(m) + " entries");
        return a;
    };
    if (kind == "constant") return DisturbanceProfile::constant(amplitude(), start);
    if (kind == "sinusoid") {
        const double freq = number(require(j, where, "frequency"), where + ".frequency");
        const double phase = j.contains("phase") ? number(j.at("phase"), where + ".phase") : 0.0;
        return DisturbanceProfile::sinusoid(amplitude(), freq, phase, start);
    }
    if (kind == "ramp") {
        const std::int64_t rise = integer(require(j, where, "rise_steps"), where + ".rise_steps");
        if (rise < 1) throw ScenarioError(where + ".rise_steps", "must be >= 1");
        return DisturbanceProfile::ramp(amplitude(), rise, start);
    }
    if (kind == "table") {
        const json& values = require(j, where, "values");
        if (!values.is_array() || values.empty()) throw ScenarioError(where + ".values", "expected a non-empty array of vectors");
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const std::string field = where + ".values[" + std::to_string(i) + "]";
            rows.push_back(vector_from_json(values[i], field));
            if (rows.back().size() != m) throw ScenarioError(field, "must have " + std::to_string(m) + " entries");
        }
        return DisturbanceProfile::table(std::move(rows), start);
    }
    throw ScenarioError(where + ".kind", "unknown disturbance kind '" + kind + "' (constant, sinusoid, ramp, table)");
}

ControllerConfig parse_controller(const json& j, std::size_t index, double system_sample_time) {
    const std::string where = "controllers[" + std::to_string(index) + "]";
    reject_unknown(j, where, {"name", "kind", "horizon", "strict", "gare_tol", "gare_max_iters", "k_x", "K_d", "gains", "sample_time"});
    ControllerConfig c;
    const std::string kind = text(require(j, where, "kind"), where + ".kind");
    const auto parsed = parse_controller_kind(kind);
    if (!parsed) throw ScenarioError(where + ".kind", "unknown controller kind '" + kind + "'");
    c.kind = *parsed;
    c.name = j.contains("name") ? text(j.at("name"), where + ".name") : kind;
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos)
        throw ScenarioError(where + ".name", "must be a non-empty file-name-safe string");
    if (j.contains("horizon")) {
        const auto h = integer(j.at("horizon"), where + ".horizon");
        if (h < 0) throw ScenarioError(where + ".horizon", "must be >= 0");
        c.horizon = static_cast<std::size_t>(h);
    }
    if (j.contains("strict")) {
        if (!j.at("strict").is_boolean()) throw ScenarioError(where + ".strict", "expected true or false");
        c.strict = j.at("strict").get<bool>();
    }
    if (j.contains("gare_tol")) c.gare.tol = number(j.at("gare_tol"), where + ".gare_tol");
    if (j.contains("gare_max_iters")) {
        const auto it = integer(j.at("gare_max_iters"), where + ".gare_max_iters");
        if (it < 1) throw ScenarioError(where + ".gare_max_iters", "must be >= 1");
        c.gare.max_iters = static_cast<std::size_t>(it);
    }
    if (j.contains("k_x")) c.k_x = matrix_from_json(j.at("k_x"), where + ".k_x");
    if (j.contains("K_d")) c.K_d = matrix_from_json(j.at("K_d"), where + ".K_d");
    if (j.contains("gains")) {
        const json& g = j.at("gains");
        reject_unknown(g, where + ".gains", {"kp", "ki", "kd"});
        c.pid.kp = number(require(g, where + ".gains", "kp"), where + ".gains.kp");
        c.pid.ki = number(require(g, where + ".gains", "ki"), where + ".gains.ki");
        c.pid.kd = number(require(g, where + ".gains", "kd"), where + ".gains.kd");
    }
    c.sample_time = j.contains("sample_time") ? number(j.at("sample_time"), where + ".sample_time") : system_sample_time;
    return c;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Matrix matrix_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ScenarioError(field, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw ScenarioError(field, "expected rows as non-empty arrays");
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        const std::string row_field = field + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != cols) throw ScenarioError(row_field, "row length differs from row 0");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = number(j[i][c], row_field + "[" + std::to_string(c) + "]");
    }
    return m;
}

Vector vector_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) throw ScenarioError(field, "expected a non-empty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
    return v;
}

Scenario parse_scenario(const json& doc) {
    reject_unknown(doc, "", {"name", "system", "cost", "reference", "x0", "steps", "disturbance", "controllers", "outputs",
                             "settling_band", "metadata"});
    Scenario s;
    s.name = text(require(doc, "", "name"), "name");
    if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
        throw ScenarioError("name", "must be a non-empty file-name-safe string");

    const json& sys = require(doc, "", "system");
    reject_unknown(sys, "system", {"A", "B", "E", "c_o", "continuous", "sample_time"});
    Matrix A = matrix_from_json(require(sys, "system", "A"), "system.A");
    Matrix B = matrix_from_json(require(sys, "system", "B"), "system.B");
    Matrix E = matrix_from_json(require(sys, "system", "E"), "system.E");
    Matrix c_o = matrix_from_json(require(sys, "system", "c_o"), "system.c_o");
    const bool continuous = sys.contains("continuous") && sys.at("continuous").is_boolean() && sys.at("continuous").get<bool>();
    if (sys.contains("continuous") && !sys.at("continuous").is_boolean())
        throw ScenarioError("system.continuous", "expected true or false");
    try {
        if (continuous) {
            s.sample_time = number(require(sys, "system", "sample_time"), "system.sample_time");
            if (!(s.sample_time > 0.0)) throw ScenarioError("system.sample_time", "must be positive");
            s.continuous = ContinuousModel{A, B, E, c_o};
            s.model = discretize_zoh(*s.continuous, s.sample_time);
        } else {
            if (sys.contains("sample_time")) s.sample_time = number(sys.at("sample_time"), "system.sample_time");
            s.model = SystemModel{std::move(A), std::move(B), std::move(E), std::move(c_o)};
            require_consistent(s.model);
        }
    } catch (const DimensionError& e) {
        throw ScenarioError("system", e.what());
    }
    const auto n = s.model.n();

    const json& cost = require(doc, "", "cost");
    reject_unknown(cost, "cost", {"Q", "R", "P_terminal"});
    s.cost.R = matrix_from_json(require(cost, "cost", "R"), "cost.R");
    s.cost.Q = cost.contains("Q") ? matrix_from_json(cost.at("Q"), "cost.Q") : Matrix(s.model.c_o.transpose() * s.model.c_o);
    s.cost.P_terminal = cost.contains("P_terminal") ? matrix_from_json(cost.at("P_terminal"), "cost.P_terminal") : Matrix::Zero(n, n);

    s.cost.r = Vector::Zero(n);
    if (doc.contains("reference")) {
        const json& ref = doc.at("reference");
        reject_unknown(ref, "reference", {"r", "regulated"});
        if (ref.contains("r") && ref.contains("regulated")) throw ScenarioError("reference", "give either r or regulated, not both");
        if (ref.contains("r")) {
            s.cost.r = vector_from_json(ref.at("r"), "reference.r");
        } else if (ref.contains("regulated")) {
            const Vector z_ref = vector_from_json(ref.at("regulated"), "reference.regulated");
            if (z_ref.size() != s.model.l()) throw ScenarioError("reference.regulated", "must have l entries");
            s.cost.r = linalg::pinv(s.model.c_o) * z_ref;  // minimum-norm r with c_o r = z_ref
        }
    }

    s.x0 = vector_from_json(require(doc, "", "x0"), "x0");
    if (s.x0.size() != n) throw ScenarioError("x0", "must have " + std::to_string(n) + " entries");
    s.steps = integer(require(doc, "", "steps"), "steps");
    if (s.steps < 1) throw ScenarioError("steps", "must be >= 1");

    s.disturbance = parse_disturbance(require(doc, "", "disturbance"), s.model.disturbance_dim());

    const json& ctrls = require(doc, "", "controllers");
    if (!ctrls.is_array() || ctrls.empty()) throw ScenarioError("controllers", "expected a non-empty array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < ctrls.size(); ++i) {
        ControllerConfig c = parse_controller(ctrls[i], i, s.sample_time);
        if (!names.insert(c.name).second) throw ScenarioError("controllers[" + std::to_string(i) + "].name", "duplicate controller name");
        try {
            validate_config(c, s.model);
        } catch (const ValidationError& e) {
            throw ScenarioError("controllers[" + std::to_string(i) + "]", e.what());
        }
        s.controllers.push_back(std::move(c));
    }

    s.outputs = {"csv", "svg", "summary"};
    if (doc.contains("outputs")) {
        const json& outs = doc.at("outputs");
        if (!outs.is_array()) throw ScenarioError("outputs", "expected an array");
        s.outputs.clear();
        for (std::size_t i = 0; i < outs.size(); ++i) {
            const std::string o = text(outs[i], "outputs[" + std::to_string(i) + "]");
            if (o != "csv" && o != "svg" && o != "summary")
                throw ScenarioError("outputs[" + std::to_string(i) + "]", "unknown output '" + o + "' (csv, svg, summary)");
            s.outputs.push_back(o);
        }
    }
    if (doc.contains("settling_band")) {
        s.settling_band = number(doc.at("settling_band"), "settling_band");
        if (!(s.settling_band > 0.0)) throw ScenarioError("settling_band", "must be positive");
    }
    if (doc.contains("metadata")) s.metadata = doc.at("metadata");

    const ValidationReport report = validate(s.model, s.cost);
    if (!report.ok()) {
        std::string msg;
        for (const auto& m : report.messages) msg += (msg.empty() ? "" : "; ") + m;
        throw ScenarioError("", "problem data failed validation: " + msg);
    }
    return s;
}

Scenario parse_scenario_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto byte = std::min<std::size_t>(e.byte, text.size());
        const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte > 0 ? byte - 1 : 0), '\n'));
        throw ScenarioError("", std::string("JSON syntax error: ") + e.what(), line);
    }
    return parse_scenario(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

}  // namespace mdr
