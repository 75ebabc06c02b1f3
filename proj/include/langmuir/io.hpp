#pragma once

#include "langmuir/analysis.hpp"
#include "langmuir/integrator.hpp"
#include "langmuir/shooting.hpp"
#include "langmuir/state.hpp"

#include <json.hpp>

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace langmuir {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view trajectory_csv_header = "t,x,y,vx,vy,energy";
inline constexpr std::string_view scan_csv_header = "h,t_h,alpha,n_magical_crossings,energy_drift,status";

/// Schema tags carried by every JSON document; the CSV layouts are tied to the same version.
inline constexpr std::string_view trajectory_schema = "langmuir-lab/trajectory/1";
inline constexpr std::string_view orbit_schema = "langmuir-lab/orbit/1";
inline constexpr std::string_view verdict_schema = "langmuir-lab/verdict/1";

/// 17 significant digits, enough to parse back to the same double.
std::string format_double(double v);

/// Samples as read back from a trajectory CSV, with the stored energy column.
struct TrajectoryTable {
    std::vector<State> samples;
    std::vector<double> energies;
};

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const VectorField& field = langmuir_field);
TrajectoryTable read_trajectory_csv(std::istream& in);

void write_scan_csv(std::ostream& out, std::span<const ShootResult> scan);

void to_json(nlohmann::json& j, const State& s);
void from_json(const nlohmann::json& j, State& s);
void to_json(nlohmann::json& j, const BracketStep& step);
void from_json(const nlohmann::json& j, BracketStep& step);
void to_json(nlohmann::json& j, const OrbitRecord& rec);
void from_json(const nlohmann::json& j, OrbitRecord& rec);
void to_json(nlohmann::json& j, const Event& ev);
void to_json(nlohmann::json& j, const CheckReport& report);

nlohmann::json trajectory_to_json(const Trajectory& traj);
nlohmann::json orbit_to_json(const OrbitRecord& rec);
/// Throws FormatError on a missing field or a foreign schema tag.
OrbitRecord orbit_from_json(const nlohmann::json& j);

/// {check name -> passed, worst_violation, tolerance, ...}, keys sorted.
nlohmann::json verdict_to_json(std::span<const CheckReport> reports);

/// Writes `text` to `path` in one go, throwing std::runtime_error on failure.
void write_file(const std::string& path, const std::string& text);

} // namespace langmuir
