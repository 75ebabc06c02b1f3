#include "langmuir/io.hpp"

#include "langmuir/dynamics.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace langmuir {

using nlohmann::json;

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const VectorField& field)
{
    out << trajectory_csv_header << '\n';
    for (const State& s : traj.samples) {
        out << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
            << format_double(s.vx) << ',' << format_double(s.vy) << ',' << format_double(field.energy(s)) << '\n';
    }
}

namespace {

double parse_field(std::string_view text, std::size_t line)
{
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size()) {
        throw FormatError("trajectory CSV line " + std::to_string(line) + ": bad number '" + std::string(text) + "'");
    }
    return v;
}

} // namespace

TrajectoryTable read_trajectory_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != trajectory_csv_header) {
        throw FormatError("trajectory CSV: expected header '" + std::string(trajectory_csv_header) + "'");
    }
    TrajectoryTable table;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        double f[6];
        std::size_t start = 0;
        for (int i = 0; i < 6; ++i) {
            const std::size_t comma = line.find(',', start);
            if ((i < 5) == (comma == std::string::npos)) {
                throw FormatError("trajectory CSV line " + std::to_string(line_no) + ": expected 6 fields");
            }
            const std::size_t stop = i < 5 ? comma : line.size();
            f[i] = parse_field(std::string_view(line).substr(start, stop - start), line_no);
            start = stop + 1;
        }
        table.samples.push_back(State{f[0], f[1], f[2], f[3], f[4]});
        table.energies.push_back(f[5]);
    }
    return table;
}

void write_scan_csv(std::ostream& out, std::span<const ShootResult> scan)
{
    out << scan_csv_header << '\n';
    for (const ShootResult& r : scan) {
        out << format_double(r.h) << ',';
        if (r.status == ShootStatus::Ok) {
            out << format_double(r.t_h) << ',' << format_double(r.alpha) << ',' << r.n_magical_crossings << ','
                << format_double(r.energy_drift);
        } else {
            out << ",,,";
        }
        out << ',' << to_string(r.status) << '\n';
    }
}

void to_json(json& j, const State& s)
{
    j = json{{"t", s.t}, {"x", s.x}, {"y", s.y}, {"vx", s.vx}, {"vy", s.vy}};
}

void from_json(const json& j, State& s)
{
    s = State{j.at("t").get<double>(), j.at("x").get<double>(), j.at("y").get<double>(),
              j.at("vx").get<double>(), j.at("vy").get<double>()};
}

void to_json(json& j, const BracketStep& step)
{
    j = json{{"h_lo", step.h_lo},
             {"h_hi", step.h_hi},
             {"h_trial", step.h_trial},
             {"alpha_trial", step.alpha_trial},
             {"secant", step.secant}};
}

void from_json(const json& j, BracketStep& step)
{
    step.h_lo = j.at("h_lo").get<double>();
    step.h_hi = j.at("h_hi").get<double>();
    step.h_trial = j.at("h_trial").get<double>();
    step.alpha_trial = j.at("alpha_trial").get<double>();
    step.secant = j.at("secant").get<bool>();
}

void to_json(json& j, const OrbitRecord& rec)
{
    j = json{{"energy", rec.energy},
             {"h_star", rec.h_star},
             {"quarter_period", rec.quarter_period},
             {"period", 4.0 * rec.quarter_period},
             {"touch_state", rec.touch_state},
             {"alpha_residual", rec.alpha_residual},
             {"kind", std::string(to_string(rec.kind))},
             {"reflection_count", rec.reflection_count},
             {"solver_trace", rec.solver_trace}};
}

void from_json(const json& j, OrbitRecord& rec)
{
    rec.energy = j.at("energy").get<double>();
    rec.h_star = j.at("h_star").get<double>();
    rec.quarter_period = j.at("quarter_period").get<double>();
    rec.touch_state = j.at("touch_state").get<State>();
    rec.alpha_residual = j.at("alpha_residual").get<double>();
    rec.kind = orbit_kind_from_string(j.at("kind").get<std::string>());
    rec.reflection_count = j.at("reflection_count").get<int>();
    rec.solver_trace = j.at("solver_trace").get<std::vector<BracketStep>>();
}

void to_json(json& j, const Event& ev)
{
    j = json{{"kind", std::string(to_string(ev.kind))}, {"t", ev.t}, {"state", ev.state}};
}

void to_json(json& j, const CheckReport& report)
{
    json details = json::object();
    for (const auto& [k, v] : report.details) {
        details[k] = v;
    }
    j = json{{"passed", report.passed},
             {"worst_violation", report.worst_violation},
             {"tolerance", report.tolerance},
             {"gated", report.gated},
             {"details", details}};
    if (!report.error.empty()) {
        j["error"] = report.error;
    }
}

json trajectory_to_json(const Trajectory& traj)
{
    json samples = json::array();
    for (const State& s : traj.samples) {
        samples.push_back(json::array({s.t, s.x, s.y, s.vx, s.vy}));
    }
    return json{{"schema", trajectory_schema},
                {"columns", json::array({"t", "x", "y", "vx", "vy"})},
                {"samples", samples},
                {"events", traj.events},
                {"max_energy_drift", traj.max_energy_drift},
                {"termination", std::string(to_string(traj.termination))}};
}

json orbit_to_json(const OrbitRecord& rec)
{
    json j = rec;
    j["schema"] = orbit_schema;
    return j;
}

OrbitRecord orbit_from_json(const json& j)
{
    try {
        if (j.at("schema").get<std::string>() != orbit_schema) {
            throw FormatError("orbit record: unexpected schema " + j.at("schema").dump());
        }
        return j.get<OrbitRecord>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("orbit record: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("orbit record: ") + e.what());
    }
}

json verdict_to_json(std::span<const CheckReport> reports)
{
    json checks = json::object();
    for (const CheckReport& r : reports) {
        checks[r.name] = r;
    }
    return json{{"schema", verdict_schema}, {"passed", all_gated_passed(reports)}, {"checks", checks}};
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << text;
    if (!out.flush()) {
        throw std::runtime_error("failed writing " + path);
    }
}

} // namespace langmuir
