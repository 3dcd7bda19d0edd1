#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "mdr/feedforward.hpp"
#include "mdr/model.hpp"
#include "mdr/riccati.hpp"

namespace mdr {

enum class ControllerKind { FiniteHorizon, Stationary, RecedingHorizon, StateFeedbackCompensation, PID };

std::string to_string(ControllerKind kind);
std::optional<ControllerKind> parse_controller_kind(const std::string& text);

struct PidGains {
    double kp = 0.0;
    double ki = 0.0;
    double kd = 0.0;
};

struct ControllerConfig {
    std::string name;
    ControllerKind kind = ControllerKind::FiniteHorizon;
    std::optional<std::size_t> horizon;  // N for FiniteHorizon (defaults to steps - 1), T for RecedingHorizon
    bool strict = true;                  // FiniteHorizon: Upsilon^{-1} (true) or Upsilon^+ (false)
    GareOptions gare;                    // Stationary
    Matrix k_x;                          // StateFeedbackCompensation, m x n
    Matrix K_d;                          // StateFeedbackCompensation, m x m
    PidGains pid;                        // PID
    double sample_time = 0.0;            // PID
};

/// Throws ValidationError when kind-specific fields are missing or mis-shaped.
void validate_config(const ControllerConfig& config, const SystemModel& model);

/// PID memory, owned by the caller and threaded through `pid_control`.
struct ControllerState {
    Vector integral;
    Vector previous_error;
    std::int64_t step = 0;

    static ControllerState zeros(Eigen::Index l);
};

/// u_k = -K_k x_k - Upsilon_k^{-1} h_k (Upsilon_k^+ when the Riccati solve was not strict).
Vector finite_horizon_control(std::size_t k, const Vector& x, const RiccatiSolution& riccati, const FeedforwardSolution& ff);

/// u = -Upsilon^+ M x - Upsilon^+ h.
Vector stationary_control(const Vector& x, const GareSolution& gare, const Vector& h);

/// First move of the T-step problem solved at the current time with d frozen at `d_now`
/// and terminal weight `cost.P_terminal`.
Vector receding_horizon_control(const Vector& x, const Vector& d_now, const SystemModel& model, const CostSpec& cost,
                                std::size_t T);

/// The receding-horizon law is time invariant for a fixed d: u = -K x - g(d).
/// Returns the gain K so callers can report the closed-loop spectral radius.
Matrix receding_horizon_gain(const SystemModel& model, const CostSpec& cost, std::size_t T);

/// Static state feedback plus known-disturbance compensation: u = k_x x + K_d d.
Vector sfc_control(const Vector& x, const Vector& d_now, const Matrix& k_x, const Matrix& K_d);

struct PidOutput {
    Vector u;
    ControllerState state;
};

/// Positional PID on the error e, derivative on error:
/// u = kp e + ki * sum(e Ts) + kd (e - e_prev) / Ts.
PidOutput pid_control(const ControllerState& state, const Vector& error, double Ts, const PidGains& gains);

}  // namespace mdr
