#include "mdr/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "mdr/errors.hpp"
#include "mdr/riccati.hpp"

namespace mdr {

using nlohmann::json;

std::string format_double(double v) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

std::vector<double> regulated_error(const Trajectory& traj, const Scenario& scenario) {
    const Vector z_ref = scenario.model.c_o * scenario.cost.r;
    std::vector<double> e;
    e.reserve(traj.z.size());
    for (const auto& z : traj.z) e.push_back((z - z_ref).norm());
    return e;
}

ControllerSummary summarize_trajectory(const Trajectory& traj, const Scenario& scenario, const ControllerConfig& config) {
    ControllerSummary s;
    s.name = config.name;
    s.kind = to_string(config.kind);
    s.ok = true;
    s.cost = evaluate_cost(traj, scenario.model, scenario.cost);

    const auto e = regulated_error(traj, scenario);
    const std::size_t tail = std::max<std::size_t>(1, e.size() / 10);
    s.steady_state_error = std::accumulate(e.end() - static_cast<std::ptrdiff_t>(tail), e.end(), 0.0) / static_cast<double>(tail);

    const auto onset = static_cast<std::size_t>(std::min<std::int64_t>(scenario.disturbance.start_step, traj.steps));
    for (std::size_t k = onset; k < e.size(); ++k) s.peak_error = std::max(s.peak_error, e[k]);

    if (e.back() <= scenario.settling_band) {
        std::size_t k = e.size() - 1;
        while (k > onset && e[k - 1] <= scenario.settling_band) --k;
        s.settling_step = static_cast<std::int64_t>(k);
    }
    s.closed_loop_radius = closed_loop_radius(config, scenario);
    return s;
}

std::optional<double> closed_loop_radius(const ControllerConfig& config, const Scenario& scenario) {
    const SystemModel& model = scenario.model;
    try {
        switch (config.kind) {
            case ControllerKind::FiniteHorizon:
                return std::nullopt;
            case ControllerKind::Stationary:
                return solve_gare(model, scenario.cost, config.gare).closed_loop_radius;
            case ControllerKind::RecedingHorizon:
                return linalg::spectral_radius(model.A - model.B * receding_horizon_gain(model, scenario.cost, *config.horizon));
            case ControllerKind::StateFeedbackCompensation:
                return linalg::spectral_radius(model.A + model.B * config.k_x);
            case ControllerKind::PID: {
                // State (x, integral, previous error); e = -c_o x up to a constant offset.
                const auto n = model.n();
                const auto l = model.l();
                const double Ts = config.sample_time;
                const auto& [kp, ki, kd] = config.pid;
                const Matrix& C = model.c_o;
                Matrix cl = Matrix::Zero(n + 2 * l, n + 2 * l);
                cl.block(0, 0, n, n) = model.A - model.B * ((kp + ki * Ts + kd / Ts) * C);
                cl.block(0, n, n, l) = ki * model.B;
                cl.block(0, n + l, n, l) = (-kd / Ts) * model.B;
                cl.block(n, 0, l, n) = -Ts * C;
                cl.block(n, n, l, l) = Matrix::Identity(l, l);
                cl.block(n + l, 0, l, n) = -C;
                return linalg::spectral_radius(cl);
            }
        }
    } catch (const Error&) {
        return std::nullopt;
    }
    return std::nullopt;
}

std::string trajectory_csv(const Trajectory& traj) {
    const auto n = traj.x.front().size();
    const auto m = traj.u.empty() ? 0 : traj.u.front().size();
    const auto md = traj.d.empty() ? 0 : traj.d.front().size();
    const auto l = traj.z.front().size();
    std::ostringstream os;
    os << "k";
    for (Eigen::Index i = 1; i <= n; ++i) os << ",x" << i;
    for (Eigen::Index i = 1; i <= m; ++i) os << ",u" << i;
    for (Eigen::Index i = 1; i <= md; ++i) os << ",d" << i;
    for (Eigen::Index i = 1; i <= l; ++i) os << ",z" << i;
    os << ",cost_cum\n";
    for (std::size_t k = 0; k < traj.u.size(); ++k) {
        os << k;
        for (const Vector* v : {&traj.x[k], &traj.u[k], &traj.d[k], &traj.z[k]})
            for (Eigen::Index i = 0; i < v->size(); ++i) os << ',' << format_double((*v)(i));
        os << ',' << format_double(traj.cost_cum[k]) << '\n';
    }
    return os.str();
}

std::string overlay_svg(const Scenario& scenario, const std::vector<std::pair<std::string, const Trajectory*>>& runs) {
    constexpr double width = 820, height = 420, left = 80, right = 180, top = 30, bottom = 50;
    constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double lo = INFINITY, hi = -INFINITY;
    std::int64_t steps = 1;
    for (const auto& [name, traj] : runs) {
        steps = std::max(steps, traj->steps);
        for (const auto& z : traj->z) {
            lo = std::min(lo, z(0));
            hi = std::max(hi, z(0));
        }
    }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto px = [&](double k) { return left + plot_w * k / static_cast<double>(steps); };
    auto py = [&](double v) { return top + plot_h * (hi - v) / (hi - lo); };

    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
       << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" << scenario.name
       << ": regulated output z1</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
       << "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (lo < 0.0 && hi > 0.0)
        os << "<line x1=\"" << left << "\" y1=\"" << py(0.0) << "\" x2=\"" << left + plot_w << "\" y2=\"" << py(0.0)
           << "\" stroke=\"#bbb\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = lo + (hi - lo) * i / 4.0;
        os << "<text x=\"" << left - 6 << "\" y=\"" << py(v) + 4 << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
           << std::setprecision(4) << std::defaultfloat << v << std::fixed << std::setprecision(2) << "</text>\n";
        const double k = static_cast<double>(steps) * i / 4.0;
        os << "<text x=\"" << px(k) << "\" y=\"" << top + plot_h + 16 << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
           << static_cast<long long>(std::llround(k)) << "</text>\n";
    }
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10 << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">step k</text>\n";

    const auto onset = scenario.disturbance.start_step;
    if (onset > 0 && onset <= steps)
        os << "<line x1=\"" << px(static_cast<double>(onset)) << "\" y1=\"" << top << "\" x2=\"" << px(static_cast<double>(onset))
           << "\" y2=\"" << top + plot_h << "\" stroke=\"#888\" stroke-dasharray=\"5,4\"/>\n"
           << "<text x=\"" << px(static_cast<double>(onset)) + 4 << "\" y=\"" << top + 12
           << "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#666\">disturbance onset</text>\n";

    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& [name, traj] = runs[r];
        const char* color = palette[r % palette.size()];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < traj->z.size(); ++k) os << (k ? " " : "") << px(static_cast<double>(k)) << ',' << py(traj->z[k](0));
        os << "\"/>\n";
        const double ly = top + 16 + 18.0 * static_cast<double>(r);
        os << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + plot_w + 36 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + plot_w + 42 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">" << name
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

json summary_to_json(const RunSummary& summary) {
    json j;
    j["scenario"] = summary.scenario;
    j["steps"] = summary.steps;
    j["onset"] = summary.onset;
    j["settling_band"] = summary.settling_band;
    json ctrls = json::array();
    for (const auto& c : summary.controllers) {
        json cj;
        cj["name"] = c.name;
        cj["kind"] = c.kind;
        cj["ok"] = c.ok;
        if (!c.ok) {
            cj["error"] = c.error;
            cj["error_kind"] = c.error_kind;
        } else {
            cj["cost"] = c.cost;
            cj["steady_state_error"] = c.steady_state_error;
            cj["peak_error"] = c.peak_error;
            cj["settling_step"] = c.settling_step ? json(*c.settling_step) : json(nullptr);
        }
        cj["closed_loop_radius"] = c.closed_loop_radius ? json(*c.closed_loop_radius) : json(nullptr);
        ctrls.push_back(std::move(cj));
    }
    j["controllers"] = std::move(ctrls);
    j["echo"] = summary.echo;
    return j;
}

RunSummary summary_from_json(const json& j) {
    try {
        RunSummary s;
        s.scenario = j.at("scenario").get<std::string>();
        s.steps = j.at("steps").get<std::int64_t>();
        s.onset = j.at("onset").get<std::int64_t>();
        s.settling_band = j.at("settling_band").get<double>();
        for (const auto& cj : j.at("controllers")) {
            ControllerSummary c;
            c.name = cj.at("name").get<std::string>();
            c.kind = cj.at("kind").get<std::string>();
            c.ok = cj.at("ok").get<bool>();
            if (c.ok) {
                c.cost = cj.at("cost").get<double>();
                c.steady_state_error = cj.at("steady_state_error").get<double>();
                c.peak_error = cj.at("peak_error").get<double>();
                if (!cj.at("settling_step").is_null()) c.settling_step = cj.at("settling_step").get<std::int64_t>();
            } else {
                c.error = cj.value("error", "");
                c.error_kind = cj.value("error_kind", "");
            }
            if (cj.contains("closed_loop_radius") && !cj.at("closed_loop_radius").is_null())
                c.closed_loop_radius = cj.at("closed_loop_radius").get<double>();
            s.controllers.push_back(std::move(c));
        }
        if (j.contains("echo")) s.echo = j.at("echo");
        return s;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed summary: ") + e.what());
    }
}

ComparisonTable compare_summaries(const std::vector<RunSummary>& summaries) {
    if (summaries.empty()) throw ValidationError("compare needs at least one summary");
    for (const auto& s : summaries)
        if (s.scenario != summaries.front().scenario)
            throw ValidationError("summaries belong to different scenarios ('" + summaries.front().scenario + "' vs '" + s.scenario + "')");

    struct Row {
        std::string name, cost, steady, peak, settling;
    };
    std::vector<Row> rows;
    auto fmt = [](double v) {
        std::ostringstream os;
        os << std::setprecision(6) << v;
        return os.str();
    };
    std::ostringstream csv;
    csv << "controller,cost,steady_state_error,peak_error,settling_step\n";
    for (const auto& s : summaries) {
        for (const auto& c : s.controllers) {
            if (!c.ok) {
                rows.push_back({c.name, "failed", "-", "-", "-"});
                csv << c.name << ",,,,\n";
                continue;
            }
            const std::string settling = c.settling_step ? std::to_string(*c.settling_step) : "never";
            rows.push_back({c.name, fmt(c.cost), fmt(c.steady_state_error), fmt(c.peak_error), settling});
            csv << c.name << ',' << format_double(c.cost) << ',' << format_double(c.steady_state_error) << ','
                << format_double(c.peak_error) << ',' << (c.settling_step ? std::to_string(*c.settling_step) : "") << '\n';
        }
    }

    const std::array<std::string, 5> header{"controller", "J_N", "steady_err", "peak_err", "settling"};
    std::array<std::size_t, 5> width{};
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& r : rows) {
        const std::array<const std::string*, 5> cells{&r.name, &r.cost, &r.steady, &r.peak, &r.settling};
        for (std::size_t i = 0; i < cells.size(); ++i) width[i] = std::max(width[i], cells[i]->size());
    }
    std::ostringstream text;
    text << "scenario: " << summaries.front().scenario << '\n';
    auto line = [&](const std::array<const std::string*, 5>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            text << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << *cells[i];
        text << '\n';
    };
    line({&header[0], &header[1], &header[2], &header[3], &header[4]});
    for (const auto& r : rows) line({&r.name, &r.cost, &r.steady, &r.peak, &r.settling});
    return ComparisonTable{text.str(), csv.str()};
}

}  // namespace mdr
