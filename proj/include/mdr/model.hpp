#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdr/linalg.hpp"

namespace mdr {

/// x_{k+1} = A x_k + B u_k + E d_k, regulated output z_k = c_o x_k.
struct SystemModel {
    Matrix A;    // n x n
    Matrix B;    // n x m
    Matrix E;    // n x m (disturbance enters with the same dimension as u)
    Matrix c_o;  // l x n

    Eigen::Index n() const { return A.rows(); }
    Eigen::Index m() const { return B.cols(); }
    Eigen::Index l() const { return c_o.rows(); }
    Eigen::Index disturbance_dim() const { return E.cols(); }
};

/// Throws DimensionError unless every shape in `model` agrees and d has dimension m.
void require_consistent(const SystemModel& model);

/// Continuous-time plant dx/dt = A x + B u + E d. Only ever consumed through `discretize_zoh`.
struct ContinuousModel {
    Matrix A;
    Matrix B;
    Matrix E;
    Matrix c_o;
};

/// Quadratic cost weights. R weighs the combined effect B u + E d, so it is n x n.
struct CostSpec {
    Matrix Q;
    Matrix R;
    Matrix P_terminal;
    Vector r;

    /// Q = c_o' c_o, the tracking error (c_o x - c_o r)'(c_o x - c_o r) written in state space.
    static CostSpec from_selector(const SystemModel& model, Matrix R, Matrix P_terminal, Vector r);
};

void require_consistent(const SystemModel& model, const CostSpec& cost);

enum class DisturbanceClass { Matched, Mismatched };

std::string to_string(DisturbanceClass c);

struct PsdFlags {
    bool Q = false;
    bool R = false;
    bool P_terminal = false;
};

struct ValidationReport {
    bool dimension_ok = false;
    bool finite_ok = false;
    PsdFlags psd_flags;
    bool detectable = false;
    DisturbanceClass disturbance_class = DisturbanceClass::Mismatched;
    std::vector<std::string> messages;

    /// Everything a solver needs: shapes, finiteness and PSD weights. Detectability only
    /// matters for the infinite-horizon solve and is reported separately.
    bool ok() const { return dimension_ok && finite_ok && psd_flags.Q && psd_flags.R && psd_flags.P_terminal; }
};

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kRankTol = 1e-9;

bool is_symmetric_psd(const Matrix& m, double symmetry_tol = kSymmetryTol, double eigen_floor = kPsdFloor);

/// Matched iff rank([B E]) == rank(B), i.e. E = B Gamma for some Gamma.
DisturbanceClass classify_disturbance(const Matrix& B, const Matrix& E, double relative_tol = kRankTol);

/// Collects every diagnostic about the problem data. Never throws.
ValidationReport validate(const SystemModel& model, const CostSpec& cost);

/// PBH test: every eigenvalue |lambda| >= 1 of A must satisfy rank([A - lambda I; Q^{1/2}]) = n.
bool check_detectability(const Matrix& A, const Matrix& Q, double relative_tol = kRankTol);

/// Exact zero-order-hold sampling through the exponential of [[A_c, I], [0, 0]] * Ts.
SystemModel discretize_zoh(const ContinuousModel& model, double Ts);

enum class DisturbanceKind { Constant, Sinusoid, Ramp, Table };

/// Known disturbance signal d_k; identically zero before `start_step`.
struct DisturbanceProfile {
    DisturbanceKind kind = DisturbanceKind::Constant;
    Vector amplitude;                 // level (constant), peak (sinusoid), final level (ramp)
    double frequency = 0.0;           // rad per step, sinusoid only
    double phase = 0.0;               // rad, sinusoid only
    std::int64_t rise_steps = 1;      // ramp only: steps from 0 to `amplitude`
    std::int64_t start_step = 0;
    std::vector<Vector> values;       // table only, values[j] is d at start_step + j

    Eigen::Index dim() const;

    static DisturbanceProfile zero(Eigen::Index dim);
    static DisturbanceProfile constant(Vector level, std::int64_t start_step = 0);
    static DisturbanceProfile sinusoid(Vector amplitude, double frequency, double phase, std::int64_t start_step = 0);
    static DisturbanceProfile ramp(Vector final_level, std::int64_t rise_steps, std::int64_t start_step = 0);
    static DisturbanceProfile table(std::vector<Vector> values, std::int64_t start_step = 0);
};

/// d_k for k >= 0. Table profiles hold their last value past the end of the table.
Vector sample_disturbance(const DisturbanceProfile& profile, std::int64_t k);

/// d_first, ..., d_{first+count-1}.
std::vector<Vector> sample_sequence(const DisturbanceProfile& profile, std::int64_t first, std::int64_t count);

}  // namespace mdr
