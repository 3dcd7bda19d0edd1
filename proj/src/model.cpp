#include "mdr/model.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "mdr/errors.hpp"

namespace mdr {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// Returns an empty string when consistent, otherwise the first problem found.
std::string model_shape_problem(const SystemModel& model) {
    const auto n = model.A.rows();
    if (n < 1) return "A must have at least one row";
    if (model.A.cols() != n) return "A must be square, got " + shape(model.A);
    if (model.B.rows() != n || model.B.cols() < 1) return "B must be " + std::to_string(n) + "xm with m >= 1, got " + shape(model.B);
    if (model.E.rows() != n) return "E must have " + std::to_string(n) + " rows, got " + shape(model.E);
    if (model.E.cols() != model.B.cols())
        return "disturbance dimension (columns of E = " + std::to_string(model.E.cols()) +
               ") must equal the input dimension m = " + std::to_string(model.B.cols());
    if (model.c_o.rows() < 1 || model.c_o.cols() != n) return "c_o must be lx" + std::to_string(n) + " with l >= 1, got " + shape(model.c_o);
    return {};
}

std::string cost_shape_problem(const SystemModel& model, const CostSpec& cost) {
    const auto n = model.A.rows();
    auto square = [n](const Matrix& m) { return m.rows() == n && m.cols() == n; };
    if (!square(cost.Q)) return "Q must be " + std::to_string(n) + "x" + std::to_string(n) + ", got " + shape(cost.Q);
    if (!square(cost.R)) return "R must be " + std::to_string(n) + "x" + std::to_string(n) + ", got " + shape(cost.R);
    if (!square(cost.P_terminal)) return "P_terminal must be " + std::to_string(n) + "x" + std::to_string(n) + ", got " + shape(cost.P_terminal);
    if (cost.r.size() != n) return "reference r must have " + std::to_string(n) + " entries, got " + std::to_string(cost.r.size());
    return {};
}

}  // namespace

void require_consistent(const SystemModel& model) {
    if (auto problem = model_shape_problem(model); !problem.empty()) throw DimensionError(problem);
}

void require_consistent(const SystemModel& model, const CostSpec& cost) {
    require_consistent(model);
    if (auto problem = cost_shape_problem(model, cost); !problem.empty()) throw DimensionError(problem);
}

CostSpec CostSpec::from_selector(const SystemModel& model, Matrix R, Matrix P_terminal, Vector r) {
    return CostSpec{model.c_o.transpose() * model.c_o, std::move(R), std::move(P_terminal), std::move(r)};
}

std::string to_string(DisturbanceClass c) { return c == DisturbanceClass::Matched ? "matched" : "mismatched"; }

bool is_symmetric_psd(const Matrix& m, double symmetry_tol, double eigen_floor) {
    if (m.rows() != m.cols() || !m.allFinite()) return false;
    if (m.size() == 0) return true;
    if (linalg::max_abs(m - m.transpose()) > symmetry_tol * std::max(1.0, linalg::max_abs(m))) return false;
    return linalg::min_eigenvalue_sym(m) >= eigen_floor;
}

DisturbanceClass classify_disturbance(const Matrix& B, const Matrix& E, double relative_tol) {
    if (B.rows() != E.rows()) throw DimensionError("B and E must have the same number of rows");
    Matrix BE(B.rows(), B.cols() + E.cols());
    BE << B, E;
    return linalg::rank(BE, relative_tol) == linalg::rank(B, relative_tol) ? DisturbanceClass::Matched
                                                                            : DisturbanceClass::Mismatched;
}

ValidationReport validate(const SystemModel& model, const CostSpec& cost) {
    ValidationReport report;
    auto note = [&report](std::string msg) { report.messages.push_back(std::move(msg)); };

    auto model_problem = model_shape_problem(model);
    if (!model_problem.empty()) note(model_problem);
    auto cost_problem = model_problem.empty() ? cost_shape_problem(model, cost) : std::string{};
    if (!cost_problem.empty()) note(cost_problem);
    report.dimension_ok = model_problem.empty() && cost_problem.empty();

    report.finite_ok = model.A.allFinite() && model.B.allFinite() && model.E.allFinite() && model.c_o.allFinite() &&
                       cost.Q.allFinite() && cost.R.allFinite() && cost.P_terminal.allFinite() && cost.r.allFinite();
    if (!report.finite_ok) note("problem data contains non-finite entries");

    report.psd_flags.Q = is_symmetric_psd(cost.Q);
    report.psd_flags.R = is_symmetric_psd(cost.R);
    report.psd_flags.P_terminal = is_symmetric_psd(cost.P_terminal);
    if (!report.psd_flags.Q) note("Q is not symmetric positive semidefinite");
    if (!report.psd_flags.R) note("R is not symmetric positive semidefinite");
    if (!report.psd_flags.P_terminal) note("P_terminal is not symmetric positive semidefinite");

    if (report.dimension_ok && report.finite_ok) {
        if (report.psd_flags.Q) {
            report.detectable = check_detectability(model.A, cost.Q);
            if (!report.detectable) note("(A, Q^1/2) is not detectable; infinite-horizon results are not certified");
        }
        report.disturbance_class = classify_disturbance(model.B, model.E);
        if (report.disturbance_class == DisturbanceClass::Mismatched)
            note("disturbance is mismatched: no Gamma with B Gamma = E");
    }
    return report;
}

bool check_detectability(const Matrix& A, const Matrix& Q, double relative_tol) {
    if (A.rows() != A.cols()) throw DimensionError("A must be square, got " + shape(A));
    if (Q.rows() != A.rows() || Q.cols() != A.rows()) throw DimensionError("Q must match A, got " + shape(Q));
    const auto n = A.rows();
    const Matrix q_root = linalg::sqrt_psd(Q);
    Eigen::EigenSolver<Matrix> es(A, false);

    using CMatrix = Eigen::MatrixXcd;
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::complex<double> lambda = es.eigenvalues()(i);
        if (std::abs(lambda) < 1.0 - 1e-12) continue;
        CMatrix pbh(2 * n, n);
        pbh.topRows(n) = A.cast<std::complex<double>>() - lambda * CMatrix::Identity(n, n);
        pbh.bottomRows(n) = q_root.cast<std::complex<double>>();
        Eigen::JacobiSVD<CMatrix> svd(pbh);
        const auto& s = svd.singularValues();
        const double cutoff = relative_tol * s(0);
        Eigen::Index rank = 0;
        for (Eigen::Index j = 0; j < s.size(); ++j)
            if (s(j) > cutoff) ++rank;
        if (rank < n) return false;
    }
    return true;
}

SystemModel discretize_zoh(const ContinuousModel& model, double Ts) {
    if (!(Ts > 0.0) || !std::isfinite(Ts)) throw DomainError("sample time must be positive and finite");
    require_consistent(SystemModel{model.A, model.B, model.E, model.c_o});
    const auto n = model.A.rows();

    // exp([[A, I], [0, 0]] Ts) = [[A_d, G], [0, I]] with G = int_0^Ts exp(A s) ds.
    Matrix augmented = Matrix::Zero(2 * n, 2 * n);
    augmented.topLeftCorner(n, n) = model.A;
    augmented.topRightCorner(n, n) = Matrix::Identity(n, n);
    const Matrix phi = (augmented * Ts).exp();
    const Matrix G = phi.topRightCorner(n, n);

    return SystemModel{phi.topLeftCorner(n, n), G * model.B, G * model.E, model.c_o};
}

Eigen::Index DisturbanceProfile::dim() const {
    if (kind == DisturbanceKind::Table) return values.empty() ? 0 : values.front().size();
    return amplitude.size();
}

DisturbanceProfile DisturbanceProfile::zero(Eigen::Index dim) { return constant(Vector::Zero(dim)); }

DisturbanceProfile DisturbanceProfile::constant(Vector level, std::int64_t start_step) {
    DisturbanceProfile p;
    p.kind = DisturbanceKind::Constant;
    p.amplitude = std::move(level);
    p.start_step = start_step;
    return p;
}

DisturbanceProfile DisturbanceProfile::sinusoid(Vector amplitude, double frequency, double phase, std::int64_t start_step) {
    DisturbanceProfile p;
    p.kind = DisturbanceKind::Sinusoid;
    p.amplitude = std::move(amplitude);
    p.frequency = frequency;
    p.phase = phase;
    p.start_step = start_step;
    return p;
}

DisturbanceProfile DisturbanceProfile::ramp(Vector final_level, std::int64_t rise_steps, std::int64_t start_step) {
    if (rise_steps < 1) throw DomainError("ramp rise_steps must be >= 1");
    DisturbanceProfile p;
    p.kind = DisturbanceKind::Ramp;
    p.amplitude = std::move(final_level);
    p.rise_steps = rise_steps;
    p.start_step = start_step;
    return p;
}

DisturbanceProfile DisturbanceProfile::table(std::vector<Vector> values, std::int64_t start_step) {
    if (values.empty()) throw DomainError("table disturbance needs at least one value");
    for (const auto& v : values)
        if (v.size() != values.front().size()) throw DimensionError("table disturbance rows differ in length");
    DisturbanceProfile p;
    p.kind = DisturbanceKind::Table;
    p.values = std::move(values);
    p.start_step = start_step;
    return p;
}

Vector sample_disturbance(const DisturbanceProfile& profile, std::int64_t k) {
    if (k < 0) throw DomainError("disturbance queried at negative step " + std::to_string(k));
    if (k < profile.start_step) return Vector::Zero(profile.dim());
    const auto elapsed = k - profile.start_step;
    switch (profile.kind) {
        case DisturbanceKind::Constant:
            return profile.amplitude;
        case DisturbanceKind::Sinusoid:
            return profile.amplitude * std::sin(profile.frequency * static_cast<double>(elapsed) + profile.phase);
        case DisturbanceKind::Ramp: {
            if (elapsed >= profile.rise_steps) return profile.amplitude;
            return profile.amplitude * (static_cast<double>(elapsed) / static_cast<double>(profile.rise_steps));
        }
        case DisturbanceKind::Table: {
            const auto idx = std::min<std::int64_t>(elapsed, static_cast<std::int64_t>(profile.values.size()) - 1);
            return profile.values[static_cast<std::size_t>(idx)];
        }
    }
    return Vector::Zero(profile.dim());
}

std::vector<Vector> sample_sequence(const DisturbanceProfile& profile, std::int64_t first, std::int64_t count) {
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
    for (std::int64_t k = first; k < first + count; ++k) out.push_back(sample_disturbance(profile, k));
    return out;
}

}  // namespace mdr
