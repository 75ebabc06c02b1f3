#include "langmuir/analysis.hpp"

#include "langmuir/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace langmuir {

namespace {

constexpr double lowest = std::numeric_limits<double>::lowest();

CheckReport make_report(std::string name, double worst, double tolerance, bool gated = true)
{
    CheckReport r;
    r.name = std::move(name);
    r.worst_violation = worst == lowest ? 0.0 : worst;
    r.tolerance = tolerance;
    r.gated = gated;
    r.passed = r.worst_violation <= tolerance;
    return r;
}

std::string keyed(const char* stem, double h)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s[h=%g]", stem, h);
    return buf;
}

// Every accepted step plus ten evenly spaced re-integrated samples inside it.
IntegratorSettings dense(const IntegratorSettings& settings, double t_limit)
{
    IntegratorSettings s = settings;
    s.t_limit = t_limit;
    s.substeps = std::max(settings.substeps, 10);
    return s;
}

Trajectory zero_energy_run(double t_end, const IntegratorSettings& settings)
{
    if (!(t_end > 0.0)) {
        throw std::invalid_argument("zero-energy checks need t_end > 0");
    }
    Trajectory tr = integrate(initial_state({0.0, 1.0}), dense(settings, t_end));
    if (tr.termination != EventKind::TimeLimit) {
        throw std::runtime_error("zero-energy run ended in " + std::string(to_string(tr.termination)) +
                                 " at t = " + std::to_string(tr.back().t));
    }
    return tr;
}

} // namespace

double CheckReport::detail(const std::string& key) const
{
    for (const auto& [k, v] : details) {
        if (k == key) {
            return v;
        }
    }
    throw std::out_of_range("CheckReport " + name + " has no detail " + key);
}

double t_max_bound()
{
    const double gamma = 1.0 / std::pow(24.5, 1.5);
    return std::numbers::pi / (2.0 * std::sqrt(8.0 * gamma));
}

CheckReport check_zero_energy_monotone(double t_end, const IntegratorSettings& settings)
{
    const Trajectory tr = zero_energy_run(t_end, settings);
    const double hill_slope = 1.0 / std::sqrt(63.0);

    double worst_rdot = lowest;
    double worst_hill = lowest;
    double min_rdot = std::numeric_limits<double>::infinity();
    double min_rdot_late = std::numeric_limits<double>::infinity();
    for (const State& s : tr.samples) {
        worst_hill = std::max(worst_hill, hill_slope * std::abs(s.x) - s.y);
        if (s.t < 0.01) {
            continue;
        }
        const double rdot = radial_velocity(s);
        worst_rdot = std::max(worst_rdot, -rdot);
        min_rdot = std::min(min_rdot, rdot);
        if (s.t >= 1.0) {
            min_rdot_late = std::min(min_rdot_late, rdot);
        }
    }
    CheckReport r = make_report("zero_energy_monotone", std::max(worst_rdot, worst_hill), 0.0);
    r.details = {{"t_end", t_end},
                 {"rdot_at_t0", radial_velocity(tr.samples.front())},
                 {"min_rdot", min_rdot},
                 {"min_rdot_after_t1", min_rdot_late},
                 {"worst_hill_excursion", worst_hill},
                 {"final_radius", tr.back().radius()},
                 {"energy_drift", tr.max_energy_drift},
                 {"samples", static_cast<double>(tr.samples.size())}};
    return r;
}

CheckReport check_zero_energy_height(double t_end, const IntegratorSettings& settings)
{
    const Trajectory tr = zero_energy_run(t_end, settings);
    double max_y = lowest;
    double t_at_max = 0.0;
    for (const State& s : tr.samples) {
        if (s.t > 0.0 && s.y > max_y) {
            max_y = s.y;
            t_at_max = s.t;
        }
    }
    CheckReport r = make_report("zero_energy_height", max_y - 1.0, 0.0, false);
    r.details = {{"t_end", t_end}, {"max_y", max_y}, {"t_at_max_y", t_at_max}};
    return r;
}

double inverted_time(double t_end, const IntegratorSettings& settings)
{
    const Trajectory tr = zero_energy_run(t_end, settings);
    // Hermite quadrature of dtau/dt = r^-4, with the exact derivative -4 r^-5 rdot.
    const auto f = [](const State& s) { return std::pow(s.radius(), -4); };
    const auto df = [](const State& s) { return -4.0 * std::pow(s.radius(), -5) * radial_velocity(s); };
    double tau = 0.0;
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        const State& a = tr.samples[i - 1];
        const State& b = tr.samples[i];
        const double dt = b.t - a.t;
        tau += 0.5 * dt * (f(a) + f(b)) + dt * dt / 12.0 * (df(a) - df(b));
    }
    return tau;
}

CheckReport check_inverted_concavity(double t_end, const IntegratorSettings& settings)
{
    const double tau_end = inverted_time(t_end, settings);
    const IntegratorSettings s = dense(settings, tau_end);
    const Trajectory tr = integrate_inverted(invert_state(initial_state({0.0, 1.0})), s);
    if (tr.termination != EventKind::TimeLimit) {
        throw std::runtime_error("inverted run ended in " + std::string(to_string(tr.termination)));
    }

    double worst_sign = lowest;
    double worst_pr = lowest;
    double worst_fd = lowest;
    double max_abs_rdd = 0.0;
    for (const State& st : tr.samples) {
        const PolarState p = to_polar(st);
        const double rdd = inverted_radial_acceleration(p);
        worst_sign = std::max(worst_sign, rdd);
        max_abs_rdd = std::max(max_abs_rdd, std::abs(rdd));
        if (st.t > 0.0) {
            worst_pr = std::max(worst_pr, p.pr);
        }

        // Central second difference in time; the run is reversible, so the
        // backward point comes from integrating with negative dt.
        const double delta = 1e-3 * p.r / st.speed();
        const double r_plus = advance(inverted_field, st, delta, s.h_max).radius();
        const double r_minus = advance(inverted_field, st, -delta, s.h_max).radius();
        const double fd = (r_plus - 2.0 * p.r + r_minus) / (delta * delta);
        const double allowed = std::max(1e-6, 1e-3 * std::abs(rdd));
        worst_fd = std::max(worst_fd, std::abs(fd - rdd) / allowed);
    }
    const double pr0 = to_polar(tr.samples.front()).pr;
    const double worst = std::max({worst_sign, worst_pr, worst_fd - 1.0, std::abs(pr0)});
    CheckReport r = make_report("inverted_concavity", worst, 0.0);
    r.details = {{"t_end", t_end},
                 {"tau_end", tau_end},
                 {"max_rdd", worst_sign},
                 {"max_abs_rdd", max_abs_rdd},
                 {"pr_at_t0", pr0},
                 {"max_pr_after_t0", worst_pr},
                 {"worst_fd_ratio", worst_fd},
                 {"final_radius", tr.back().radius()},
                 {"samples", static_cast<double>(tr.samples.size())}};
    return r;
}

CheckReport check_tmax_bound(std::span<const double> h_grid, const IntegratorSettings& settings)
{
    const double t_max = t_max_bound();
    const std::vector<ShootResult> scan = scan_alpha(-1.0, h_grid, settings);
    double worst = lowest;
    double max_th = 0.0;
    int ok = 0;
    for (const ShootResult& res : scan) {
        if (res.status != ShootStatus::Ok) {
            continue;
        }
        ++ok;
        worst = std::max(worst, res.t_h - t_max);
        max_th = std::max(max_th, res.t_h);
    }
    CheckReport r = make_report("tmax_bound", worst, 0.0);
    r.details = {{"t_max", t_max},
                 {"max_t_h", max_th},
                 {"grid_points", static_cast<double>(h_grid.size())},
                 {"successful", static_cast<double>(ok)}};
    return r;
}

CheckReport check_tmax_margin(std::span<const double> h_grid, const IntegratorSettings& settings)
{
    const double t_max = t_max_bound();
    double max_ratio = 0.0;
    for (const ShootResult& res : scan_alpha(-1.0, h_grid, settings)) {
        if (res.status == ShootStatus::Ok) {
            max_ratio = std::max(max_ratio, res.t_h / t_max);
        }
    }
    CheckReport r = make_report("tmax_margin", max_ratio, 0.95, false);
    r.details = {{"t_max", t_max}, {"max_ratio", max_ratio}};
    return r;
}

CheckReport check_initial_acceleration(std::span<const double> h_samples)
{
    double worst = 0.0;
    double h_worst = 0.0;
    for (double h : h_samples) {
        const double dev = std::abs(acceleration(0.0, h).ay + 7.0 / (h * h));
        if (dev > worst) {
            worst = dev;
            h_worst = h;
        }
    }
    CheckReport r = make_report("initial_acceleration", worst, 1e-12);
    r.details = {{"samples", static_cast<double>(h_samples.size())}, {"h_at_worst", h_worst}};
    return r;
}

CheckReport check_magical_prefix(std::span<const double> h_grid, const IntegratorSettings& settings)
{
    const IntegratorSettings s = dense(settings, settings.t_limit);
    double worst = lowest;
    int vacuous = 0;
    for (double h : h_grid) {
        const Trajectory tr = integrate(initial_state({-1.0, h}), s, {}, {EventKind::MagicalLineCross});
        if (tr.termination != EventKind::MagicalLineCross) {
            ++vacuous;
            continue;
        }
        for (const State& st : tr.samples) {
            if (st.t > 0.0) {
                worst = std::max(worst, st.vy);
            }
        }
    }
    CheckReport r = make_report("magical_prefix", worst, 0.0);
    r.details = {{"grid_points", static_cast<double>(h_grid.size())},
                 {"vacuous", static_cast<double>(vacuous)},
                 {"max_vy", worst == lowest ? 0.0 : worst}};
    return r;
}

CheckReport check_tau_growth(std::span<const double> h_sequence, const IntegratorSettings& settings)
{
    for (std::size_t i = 0; i < h_sequence.size(); ++i) {
        if (!(h_sequence[i] > 0.0) || (i > 0 && !(h_sequence[i] < h_sequence[i - 1]))) {
            throw std::invalid_argument("check_tau_growth: sequence must be positive and decreasing");
        }
    }
    double worst = lowest;
    std::vector<std::pair<std::string, double>> details;
    double previous = 0.0;
    for (std::size_t i = 0; i < h_sequence.size(); ++i) {
        const double tau = shoot(-h_sequence[i], 1.0, settings).t_h;
        details.emplace_back(keyed("tau", h_sequence[i]), tau);
        if (i > 0) {
            worst = std::max(worst, previous - tau);
        }
        previous = tau;
    }
    CheckReport r = make_report("tau_growth", worst, 0.0);
    r.details = std::move(details);
    return r;
}

CheckReport check_energy_drift(std::span<const double> h_grid, const IntegratorSettings& settings)
{
    double grid_drift = 0.0;
    for (const ShootResult& res : scan_alpha(-1.0, h_grid, settings)) {
        if (res.status == ShootStatus::Ok) {
            grid_drift = std::max(grid_drift, res.energy_drift);
        }
    }
    const OrbitRecord langmuir = find_langmuir_orbit(-1.0, default_langmuir_bracket(-1.0), settings);
    const double langmuir_drift = shoot_trajectory(-1.0, langmuir.h_star, 1, settings).max_energy_drift;
    const auto brake_bracket = default_brake_bracket(-1.0);
    const int k = classify_reflection_count(-1.0, brake_bracket, settings);
    double brake_drift = 0.0;
    if (k > 0) {
        const OrbitRecord brake = find_brake_orbit(-1.0, brake_bracket, k, settings);
        brake_drift = shoot_trajectory(-1.0, brake.h_star, k, settings).max_energy_drift;
    }
    CheckReport r = make_report("energy_drift", std::max({grid_drift, langmuir_drift, brake_drift}), 1e-8);
    r.details = {{"grid_drift", grid_drift}, {"langmuir_orbit_drift", langmuir_drift}, {"brake_orbit_drift", brake_drift}};
    return r;
}

CheckReport check_langmuir_orbit(const IntegratorSettings& settings)
{
    const OrbitRecord rec = find_langmuir_orbit(-1.0, default_langmuir_bracket(-1.0), settings);
    const double speed = rec.touch_state.speed();
    const double worst =
        std::max({std::abs(rec.h_star - 1.398) / 0.02, std::abs(rec.alpha_residual) / 1e-8, speed / 1e-6});
    CheckReport r = make_report("langmuir_orbit", worst, 1.0);
    r.details = {{"h_star", rec.h_star},
                 {"quarter_period", rec.quarter_period},
                 {"alpha_residual", rec.alpha_residual},
                 {"touch_speed", speed},
                 {"iterations", static_cast<double>(rec.solver_trace.size())}};
    return r;
}

CheckReport check_orbit_scaling(const IntegratorSettings& settings)
{
    const OrbitRecord one = find_langmuir_orbit(-1.0, default_langmuir_bracket(-1.0), settings);
    const OrbitRecord two = find_langmuir_orbit(-2.0, default_langmuir_bracket(-2.0), settings);
    const double h_dev = std::abs(two.h_star - 0.5 * one.h_star);

    // Compare the rescaled E = -1 orbit against a fresh E = -2 integration at sampled times.
    const Trajectory orbit = assemble_periodic_orbit(one, settings);
    const State start = initial_state({-2.0, two.h_star});
    constexpr int n_points = 16;
    double point_dev = 0.0;
    for (int i = 0; i <= n_points; ++i) {
        const std::size_t idx = (orbit.samples.size() - 1) * i / n_points;
        const State predicted = scale_state(orbit.samples[idx], 0.5);
        State actual = start;
        if (predicted.t > 0.0) {
            IntegratorSettings s = settings;
            s.t_limit = predicted.t;
            actual = integrate(start, s).back();
        }
        point_dev = std::max({point_dev, std::abs(actual.x - predicted.x), std::abs(actual.y - predicted.y),
                              std::abs(actual.vx - predicted.vx), std::abs(actual.vy - predicted.vy)});
    }
    CheckReport r = make_report("orbit_scaling", std::max(h_dev / 1e-5, point_dev / 1e-6), 1.0);
    r.details = {{"h_star_e1", one.h_star},
                 {"h_star_e2", two.h_star},
                 {"h_star_deviation", h_dev},
                 {"pointwise_deviation", point_dev}};
    return r;
}

CheckReport check_brake_orbit(const IntegratorSettings& settings)
{
    const auto bracket = default_brake_bracket(-1.0);
    const int k = classify_reflection_count(-1.0, bracket, settings);
    if (k == 0) {
        CheckReport r = make_report("brake_orbit", std::numeric_limits<double>::infinity(), 1.0);
        r.details = {{"reflection_count", 0.0}};
        return r;
    }
    const OrbitRecord rec = find_brake_orbit(-1.0, bracket, k, settings);
    const double speed = rec.touch_state.speed();
    const bool inside = rec.h_star > bracket.first && rec.h_star < bracket.second;
    CheckReport r = make_report("brake_orbit", std::max(inside ? 0.0 : 2.0, speed / 1e-6), 1.0);
    r.details = {{"reflection_count", static_cast<double>(k)},
                 {"h_star", rec.h_star},
                 {"quarter_period", rec.quarter_period},
                 {"touch_x", rec.touch_state.x},
                 {"touch_y", rec.touch_state.y},
                 {"touch_speed", speed}};
    return r;
}

std::vector<CheckReport> run_verification(const IntegratorSettings& settings)
{
    settings.validate();
    const std::vector<double> grid = default_scan_grid(-1.0);
    const std::vector<double> heights = random_heights();
    const std::vector<double> tau_sequence{0.5, 0.2, 0.1, 0.05, 0.02};

    const std::vector<std::pair<std::string, std::function<CheckReport()>>> tasks{
        {"zero_energy_monotone", [&] { return check_zero_energy_monotone(50.0, settings); }},
        {"zero_energy_height", [&] { return check_zero_energy_height(50.0, settings); }},
        {"inverted_concavity", [&] { return check_inverted_concavity(50.0, settings); }},
        {"tmax_bound", [&] { return check_tmax_bound(grid, settings); }},
        {"tmax_margin", [&] { return check_tmax_margin(grid, settings); }},
        {"initial_acceleration", [&] { return check_initial_acceleration(heights); }},
        {"magical_prefix", [&] { return check_magical_prefix(grid, settings); }},
        {"tau_growth", [&] { return check_tau_growth(tau_sequence, settings); }},
        {"energy_drift", [&] { return check_energy_drift(grid, settings); }},
        {"langmuir_orbit", [&] { return check_langmuir_orbit(settings); }},
        {"orbit_scaling", [&] { return check_orbit_scaling(settings); }},
        {"brake_orbit", [&] { return check_brake_orbit(settings); }},
    };

    std::vector<CheckReport> reports(tasks.size());
    const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            reports[i] = tasks[i].second();
        } catch (const std::exception& e) {
            reports[i] = make_report(tasks[i].first, std::numeric_limits<double>::infinity(), 0.0);
            reports[i].error = e.what();
        }
    }
    std::sort(reports.begin(), reports.end(),
              [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
    return reports;
}

bool all_gated_passed(std::span<const CheckReport> reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed || !r.gated; });
}

std::vector<double> random_heights(std::size_t n, unsigned long long seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 100.0);
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
        const double h = dist(rng);
        if (h > 0.0) {
            out.push_back(h);
        }
    }
    return out;
}

} // namespace langmuir
