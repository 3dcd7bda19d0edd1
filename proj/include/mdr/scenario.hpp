#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdr/control.hpp"
#include "mdr/errors.hpp"
#include "mdr/model.hpp"

namespace mdr {

/// A complete, validated simulation setup loaded from a JSON scenario file.
struct Scenario {
    std::string name;
    SystemModel model;
    std::optional<ContinuousModel> continuous;  // set when `model` came from ZOH sampling
    double sample_time = 0.0;                   // 0 for natively discrete systems
    CostSpec cost;
    Vector x0;
    std::int64_t steps = 0;
    DisturbanceProfile disturbance;
    std::vector<ControllerConfig> controllers;
    std::vector<std::string> outputs;  // subset of {"csv", "svg", "summary"}
    double settling_band = 1e-3;
    nlohmann::json metadata = nlohmann::json::object();
};

/// Field-level problem in a scenario document. `field()` is a dotted path such as
/// "controllers[1].k_x"; `line()` is set for syntax errors.
class ScenarioError : public ValidationError {
public:
    ScenarioError(std::string field, const std::string& message, std::optional<std::size_t> line = std::nullopt);

    const std::string& field() const noexcept { return field_; }
    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    std::string field_;
    std::optional<std::size_t> line_;
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json vector_to_json(const Vector& v);

/// Throws ScenarioError naming `field` on malformed input.
Matrix matrix_from_json(const nlohmann::json& j, const std::string& field);
Vector vector_from_json(const nlohmann::json& j, const std::string& field);

}  // namespace mdr
