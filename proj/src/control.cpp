#include "mdr/control.hpp"

#include <array>
#include <utility>

#include "mdr/errors.hpp"

namespace mdr {

namespace {

constexpr std::array<std::pair<ControllerKind, const char*>, 5> kKindNames{{
    {ControllerKind::FiniteHorizon, "finite_horizon"},
    {ControllerKind::Stationary, "stationary"},
    {ControllerKind::RecedingHorizon, "receding_horizon"},
    {ControllerKind::StateFeedbackCompensation, "state_feedback_compensation"},
    {ControllerKind::PID, "pid"},
}};

}  // namespace

std::string to_string(ControllerKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "unknown";
}

std::optional<ControllerKind> parse_controller_kind(const std::string& text) {
    for (const auto& [k, name] : kKindNames)
        if (text == name) return k;
    return std::nullopt;
}

void validate_config(const ControllerConfig& config, const SystemModel& model) {
    const std::string who = "controller '" + config.name + "': ";
    switch (config.kind) {
        case ControllerKind::FiniteHorizon:
            break;
        case ControllerKind::Stationary:
            if (!(config.gare.tol > 0.0)) throw ValidationError(who + "GARE tolerance must be positive");
            break;
        case ControllerKind::RecedingHorizon:
            if (!config.horizon || *config.horizon < 1) throw ValidationError(who + "receding horizon needs horizon >= 1");
            break;
        case ControllerKind::StateFeedbackCompensation:
            if (config.k_x.rows() != model.m() || config.k_x.cols() != model.n())
                throw ValidationError(who + "k_x must be " + std::to_string(model.m()) + "x" + std::to_string(model.n()));
            if (config.K_d.rows() != model.m() || config.K_d.cols() != model.disturbance_dim())
                throw ValidationError(who + "K_d must be " + std::to_string(model.m()) + "x" +
                                      std::to_string(model.disturbance_dim()));
            break;
        case ControllerKind::PID:
            if (!(config.sample_time > 0.0)) throw ValidationError(who + "PID needs a positive sample_time");
            if (model.l() != model.m())
                throw ValidationError(who + "PID maps each regulated output to one input; needs l == m");
            break;
    }
}

ControllerState ControllerState::zeros(Eigen::Index l) {
    return ControllerState{Vector::Zero(l), Vector::Zero(l), 0};
}

Vector finite_horizon_control(std::size_t k, const Vector& x, const RiccatiSolution& riccati, const FeedforwardSolution& ff) {
    if (ff.h.size() != riccati.horizon + 1) throw DimensionError("feedforward and Riccati horizons differ");
    if (k > riccati.horizon)
        throw DomainError("step " + std::to_string(k) + " is past the horizon N = " + std::to_string(riccati.horizon));
    if (x.size() != riccati.K[k].cols()) throw DimensionError("state has wrong dimension");
    return -(riccati.K[k] * x) - riccati.Upsilon_inv[k] * ff.h[k];
}

Vector stationary_control(const Vector& x, const GareSolution& gare, const Vector& h) {
    if (x.size() != gare.K.cols() || h.size() != gare.K.rows()) throw DimensionError("stationary_control: wrong x or h dimension");
    return -(gare.K * x) - gare.Upsilon_inv * h;
}

Vector receding_horizon_control(const Vector& x, const Vector& d_now, const SystemModel& model, const CostSpec& cost,
                                std::size_t T) {
    if (T < 1) throw DomainError("receding horizon T must be >= 1");
    if (d_now.size() != model.disturbance_dim()) throw DimensionError("d_now has wrong dimension");
    const RiccatiSolution riccati = solve_finite_horizon(model, cost, T, true);
    const std::vector<Vector> frozen(T + 1, d_now);
    const FeedforwardSolution ff = solve_recursive(riccati, model, cost, frozen);
    return finite_horizon_control(0, x, riccati, ff);
}

Matrix receding_horizon_gain(const SystemModel& model, const CostSpec& cost, std::size_t T) {
    if (T < 1) throw DomainError("receding horizon T must be >= 1");
    return solve_finite_horizon(model, cost, T, true).K.front();
}

Vector sfc_control(const Vector& x, const Vector& d_now, const Matrix& k_x, const Matrix& K_d) {
    if (k_x.cols() != x.size() || K_d.cols() != d_now.size() || k_x.rows() != K_d.rows())
        throw DimensionError("sfc_control: gain shapes do not match x and d");
    return k_x * x + K_d * d_now;
}

PidOutput pid_control(const ControllerState& state, const Vector& error, double Ts, const PidGains& gains) {
    if (!(Ts > 0.0)) throw DomainError("PID sample time must be positive");
    if (state.integral.size() != error.size() || state.previous_error.size() != error.size())
        throw DimensionError("PID state does not match the error dimension");
    PidOutput out;
    out.state.integral = state.integral + error * Ts;
    out.state.previous_error = error;
    out.state.step = state.step + 1;
    out.u = gains.kp * error + gains.ki * out.state.integral + gains.kd * (error - state.previous_error) / Ts;
    return out;
}

}  // namespace mdr
