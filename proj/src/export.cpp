#include "gss/export.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

namespace gss {

std::string format_double(double v, const Precision& prec) {
    char buf[40];
    if (prec.full) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.*g", prec.sig, v);
    }
    return buf;
}

double round_for_output(double v, const Precision& prec) {
    if (prec.full) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", prec.sig, v);
    return std::strtod(buf, nullptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const Precision& prec) {
    for (const auto& e : traj.events) {
        out << "# event," << format_double(e.t, prec) << ',' << e.label << '\n';
    }
    out << (traj.frame == Frame::Physical ? "t,delta,x_int" : "t,delta,x") << '\n';
    for (const auto& s : traj.samples) {
        out << format_double(s.t, prec) << ',' << format_double(s.delta, prec) << ','
            << format_double(s.x, prec) << '\n';
    }
}

void write_boundary_csv(std::ostream& out, const Boundary& boundary,
                        const Precision& prec) {
    out << "label,delta,x\n";
    const char* label = to_string(boundary.label);
    for (std::size_t k = 0; k < boundary.segments.size(); ++k) {
        if (boundary.segments.size() > 1) {
            out << "# segment," << k << '\n';
        }
        for (const auto& p : boundary.segments[k]) {
            out << label << ',' << format_double(p.delta, prec) << ','
                << format_double(p.x, prec) << '\n';
        }
    }
}

void write_grid_csv(std::ostream& out, const ClassificationGrid& grid,
                    const Precision& prec) {
    out << "delta,x,label\n";
    for (int i = 0; i < grid.n_delta; ++i) {
        for (int j = 0; j < grid.n_x; ++j) {
            out << format_double(grid.delta_at(i), prec) << ','
                << format_double(grid.x_at(j), prec) << ',' << to_string(grid.at(i, j))
                << '\n';
        }
    }
}

nlohmann::json boundary_to_json(const Boundary& boundary, const Precision& prec) {
    nlohmann::json j;
    j["label"] = to_string(boundary.label);
    j["closed"] = boundary.closed;
    if (boundary.critical_value) {
        j["critical_value"] = round_for_output(*boundary.critical_value, prec);
    }
    if (!boundary.seeds.empty()) {
        auto& seeds = j["seed_saddles"] = nlohmann::json::array();
        for (const auto& s : boundary.seeds) {
            seeds.push_back({round_for_output(s.delta, prec),
                             round_for_output(s.x, prec)});
        }
    }
    auto& segs = j["segments"] = nlohmann::json::array();
    for (const auto& seg : boundary.segments) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : seg) {
            pts.push_back({round_for_output(p.delta, prec), round_for_output(p.x, prec)});
        }
        segs.push_back(std::move(pts));
    }
    return j;
}

nlohmann::json trajectory_to_json(const Trajectory& traj, const Precision& prec,
                                  std::size_t max_points) {
    nlohmann::json j;
    j["frame"] = traj.frame == Frame::Physical ? "physical" : "dimensionless";
    auto& events = j["events"] = nlohmann::json::array();
    for (const auto& e : traj.events) {
        events.push_back({{"t", round_for_output(e.t, prec)}, {"label", e.label}});
    }
    const std::size_t n = traj.samples.size();
    auto& samples = j["samples"] = nlohmann::json::array();
    if (n == 0) return j;
    const std::size_t stride = n <= max_points ? 1 : (n + max_points - 1) / max_points;
    for (std::size_t i = 0; i < n; i += stride) {
        const auto& s = traj.samples[i];
        samples.push_back({round_for_output(s.t, prec), round_for_output(s.delta, prec),
                           round_for_output(s.x, prec)});
    }
    if ((n - 1) % stride != 0) {
        const auto& s = traj.samples.back();
        samples.push_back({round_for_output(s.t, prec), round_for_output(s.delta, prec),
                           round_for_output(s.x, prec)});
    }
    return j;
}

nlohmann::json containment_to_json(const ContainmentReport& report,
                                   const Precision& prec) {
    nlohmann::json j;
    j["n_inside"] = report.n_inside;
    j["n_stable_inside"] = report.n_stable_inside;
    j["n_unstable_inside"] = report.n_unstable_inside;
    j["n_inconclusive_inside"] = report.n_inconclusive_inside;
    j["fraction_contained"] = round_for_output(report.fraction_contained, prec);
    auto& v = j["violations"] = nlohmann::json::array();
    for (const auto& p : report.violations) {
        v.push_back({round_for_output(p.delta, prec), round_for_output(p.x, prec)});
    }
    return j;
}

nlohmann::json verdict_to_json(const Verdict& verdict, const Precision& prec) {
    return nlohmann::json{{"label", to_string(verdict.label)},
                          {"value", round_for_output(verdict.v_value, prec)},
                          {"critical", round_for_output(verdict.v_cr, prec)},
                          {"in_window", verdict.in_window}};
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw ParameterError("cannot open output file: " + path);
    }
    out << content;
}

}  // namespace gss
