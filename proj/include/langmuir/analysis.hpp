#pragma once

#include "langmuir/integrator.hpp"
#include "langmuir/shooting.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace langmuir {

/// Outcome of one numerical check. `passed` holds iff worst_violation <= tolerance.
/// Sign checks report the offending quantity itself against tolerance 0;
/// compound checks report the largest ratio observed/allowed against tolerance 1.
struct CheckReport {
    std::string name;
    bool passed = false;
    double worst_violation = 0.0;
    double tolerance = 0.0;
    /// Ungated reports are diagnostics and never fail a verification run.
    bool gated = true;
    /// Named scalar diagnostics, in insertion order.
    std::vector<std::pair<std::string, double>> details;
    /// Set when the check could not run to completion.
    std::string error;

    double detail(const std::string& key) const;
};

/// The closed-form upper bound on the first x-rest time at E = -1.
double t_max_bound();

/// Radial monotonicity of the (E = 0, h = 1) orbit on [0, t_end].
CheckReport check_zero_energy_monotone(double t_end, const IntegratorSettings& settings);

/// Diagnostic: largest height reached by the (E = 0, h = 1) orbit after t = 0, against 1.
CheckReport check_zero_energy_height(double t_end, const IntegratorSettings& settings);

/// Original time t_end expressed in the time of the inverted chart, i.e. the
/// integral of r^-4 along the (E = 0, h = 1) orbit.
double inverted_time(double t_end, const IntegratorSettings& settings);

/// Concavity of r in the inverted chart over the image of original times [0, t_end].
CheckReport check_inverted_concavity(double t_end, const IntegratorSettings& settings);

CheckReport check_tmax_bound(std::span<const double> h_grid, const IntegratorSettings& settings);

/// Diagnostic companion of check_tmax_bound: smallest relative distance to the bound.
CheckReport check_tmax_margin(std::span<const double> h_grid, const IntegratorSettings& settings);

CheckReport check_initial_acceleration(std::span<const double> h_samples);

/// vy < 0 on every sample in (0, first magical-line crossing]. Heights whose
/// run ends without a crossing count as vacuous passes.
CheckReport check_magical_prefix(std::span<const double> h_grid, const IntegratorSettings& settings);

/// First x-rest time at height 1 and energy -h must grow as h decreases.
CheckReport check_tau_growth(std::span<const double> h_sequence, const IntegratorSettings& settings);

/// Worst relative energy drift over the shooting runs of an E = -1 grid and
/// the two periodic orbits.
CheckReport check_energy_drift(std::span<const double> h_grid, const IntegratorSettings& settings);

CheckReport check_langmuir_orbit(const IntegratorSettings& settings);

/// h*(-2) against h*(-1)/2, and the E = -2 orbit against the rescaled E = -1 orbit.
CheckReport check_orbit_scaling(const IntegratorSettings& settings);

CheckReport check_brake_orbit(const IntegratorSettings& settings);

/// Runs the full suite concurrently. Reports come back sorted by name.
std::vector<CheckReport> run_verification(const IntegratorSettings& settings);

bool all_gated_passed(std::span<const CheckReport> reports);

/// 1000 heights in (0, 100) from a fixed seed.
std::vector<double> random_heights(std::size_t n = 1000, unsigned long long seed = 20240607ULL);

} // namespace langmuir
