#include "langmuir/shooting.hpp"

#include "langmuir/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <omp.h>

namespace langmuir {

std::string_view to_string(ShootStatus status)
{
    switch (status) {
    case ShootStatus::Ok: return "Ok";
    case ShootStatus::NoRest: return "NoRest";
    case ShootStatus::Failed: return "Failed";
    }
    return "Unknown";
}

std::string_view to_string(OrbitKind kind)
{
    return kind == OrbitKind::Langmuir ? "langmuir" : "brake";
}

OrbitKind orbit_kind_from_string(std::string_view name)
{
    if (name == "langmuir") return OrbitKind::Langmuir;
    if (name == "brake") return OrbitKind::Brake;
    throw std::invalid_argument("unknown orbit kind: " + std::string(name));
}

Trajectory shoot_trajectory(double energy, double h, int k, const IntegratorSettings& settings)
{
    if (k < 1) {
        throw std::invalid_argument("shoot: rest index must be at least 1");
    }
    const State s0 = initial_state({energy, h});
    Trajectory traj = integrate(s0, settings, {EventKind::MagicalLineCross}, {EventKind::XVelocityZero}, k);
    if (traj.termination != EventKind::XVelocityZero) {
        throw NoRest("shoot: h = " + std::to_string(h) + " ended in " + std::string(to_string(traj.termination)) +
                         " before x-rest " + std::to_string(k),
                     k);
    }
    return traj;
}

ShootResult shoot(double energy, double h, const IntegratorSettings& settings)
{
    const Trajectory traj = shoot_trajectory(energy, h, 1, settings);
    const State& rest = traj.back();
    ShootResult res;
    res.h = h;
    res.t_h = rest.t;
    res.alpha = rest.vy;
    res.state_at_th = rest;
    res.n_magical_crossings = static_cast<int>(traj.events_of(EventKind::MagicalLineCross).size());
    res.energy_drift = traj.max_energy_drift;
    return res;
}

double alpha_k(double energy, double h, int k, const IntegratorSettings& settings)
{
    return shoot_trajectory(energy, h, k, settings).back().vy;
}

namespace {

void require_ordered(std::pair<double, double> bracket)
{
    if (!(bracket.first < bracket.second) || !(bracket.first > 0.0)) {
        throw BadBracket("bracket must satisfy 0 < lo < hi");
    }
}

OrbitRecord find_orbit(double energy, std::pair<double, double> bracket, int k, OrbitKind kind,
                       const IntegratorSettings& settings, const RootOptions& options)
{
    if (!(energy < 0.0)) {
        throw std::invalid_argument("find orbit: energy must be negative");
    }
    require_ordered(bracket);
    OrbitRecord rec;
    rec.energy = energy;
    rec.kind = kind;
    rec.reflection_count = k;
    const auto f = [&](double h) { return alpha_k(energy, h, k, settings); };
    const auto [h_star, residual] = bracketed_root(f, bracket.first, bracket.second, options, &rec.solver_trace);

    const Trajectory quarter = shoot_trajectory(energy, h_star, k, settings);
    rec.h_star = h_star;
    rec.quarter_period = quarter.back().t;
    rec.touch_state = quarter.back();
    rec.alpha_residual = residual;
    return rec;
}

} // namespace

OrbitRecord find_langmuir_orbit(double energy, std::pair<double, double> bracket, const IntegratorSettings& settings,
                                const RootOptions& options)
{
    return find_orbit(energy, bracket, 1, OrbitKind::Langmuir, settings, options);
}

int classify_reflection_count(double energy, std::pair<double, double> bracket, const IntegratorSettings& settings,
                              int k_max)
{
    require_ordered(bracket);
    const auto rests = [&](double h) {
        const Trajectory t = shoot_trajectory(energy, h, k_max, settings);
        std::vector<double> out;
        for (const Event& e : t.events_of(EventKind::XVelocityZero)) {
            out.push_back(e.state.vy);
        }
        return out;
    };
    const std::vector<double> lo = rests(bracket.first);
    const std::vector<double> hi = rests(bracket.second);
    for (int k = 2; k <= k_max; ++k) {
        if ((lo[k - 1] < 0.0) != (hi[k - 1] < 0.0)) {
            return k;
        }
    }
    return 0;
}

OrbitRecord find_brake_orbit(double energy, std::pair<double, double> bracket, int k,
                             const IntegratorSettings& settings, const RootOptions& options)
{
    if (k < 1) {
        throw std::invalid_argument("find_brake_orbit: reflection count must be at least 1");
    }
    return find_orbit(energy, bracket, k, OrbitKind::Brake, settings, options);
}

namespace {

ShootResult shoot_guarded(double energy, double h, const IntegratorSettings& settings)
{
    try {
        return shoot(energy, h, settings);
    } catch (const NoRest& e) {
        ShootResult r;
        r.h = h;
        r.status = ShootStatus::NoRest;
        r.message = e.what();
        return r;
    } catch (const std::exception& e) {
        ShootResult r;
        r.h = h;
        r.status = ShootStatus::Failed;
        r.message = e.what();
        return r;
    }
}

} // namespace

std::vector<ShootResult> scan_alpha(double energy, std::span<const double> h_grid,
                                    const IntegratorSettings& settings)
{
    std::vector<ShootResult> out(h_grid.size());
    const auto n = static_cast<std::ptrdiff_t>(h_grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = shoot_guarded(energy, h_grid[i], settings);
    }
    return out;
}

std::vector<ShootResult> scan_alpha_serial(double energy, std::span<const double> h_grid,
                                           const IntegratorSettings& settings)
{
    std::vector<ShootResult> out;
    out.reserve(h_grid.size());
    for (double h : h_grid) {
        out.push_back(shoot_guarded(energy, h, settings));
    }
    return out;
}

std::vector<std::pair<double, double>> sign_change_brackets(std::span<const ShootResult> scan)
{
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 1; i < scan.size(); ++i) {
        const ShootResult& a = scan[i - 1];
        const ShootResult& b = scan[i];
        if (a.status == ShootStatus::Ok && b.status == ShootStatus::Ok && (a.alpha < 0.0) != (b.alpha < 0.0)) {
            out.emplace_back(a.h, b.h);
        }
    }
    return out;
}

std::vector<ShootResult> refine_scan(double energy, std::vector<ShootResult> scan, int levels,
                                     const IntegratorSettings& settings)
{
    for (int level = 0; level < levels; ++level) {
        std::vector<double> mids;
        for (const auto& [lo, hi] : sign_change_brackets(scan)) {
            mids.push_back(0.5 * (lo + hi));
        }
        if (mids.empty()) {
            break;
        }
        std::vector<ShootResult> extra = scan_alpha(energy, mids, settings);
        scan.insert(scan.end(), extra.begin(), extra.end());
        std::stable_sort(scan.begin(), scan.end(),
                         [](const ShootResult& l, const ShootResult& r) { return l.h < r.h; });
    }
    return scan;
}

std::vector<double> uniform_grid(double lo, double hi, int n)
{
    if (n < 1) {
        throw std::invalid_argument("uniform_grid: need at least one point");
    }
    if (n == 1) {
        return {lo};
    }
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = lo + (hi - lo) * i / (n - 1);
    }
    return grid;
}

std::vector<double> default_scan_grid(double energy)
{
    const double a = -1.0 / energy;
    std::vector<double> grid = uniform_grid(0.05, 3.45, 50);
    for (double& h : grid) {
        h *= a;
    }
    return grid;
}

std::pair<double, double> default_langmuir_bracket(double energy)
{
    const double a = -1.0 / energy;
    return {0.5 * a, 3.0 * a};
}

std::pair<double, double> default_brake_bracket(double energy)
{
    const double a = -1.0 / energy;
    return {0.3 * a, 0.8 * a};
}

Trajectory assemble_periodic_orbit(const OrbitRecord& record, const IntegratorSettings& settings,
                                   double closure_tol)
{
    const Trajectory quarter = shoot_trajectory(record.energy, record.h_star, record.reflection_count, settings);
    const double T = quarter.back().t;
    const std::vector<State>& q = quarter.samples;

    Trajectory orbit;
    orbit.max_energy_drift = quarter.max_energy_drift;
    orbit.events = quarter.events;
    orbit.termination = EventKind::TimeLimit;

    std::vector<State> half = q;
    for (auto it = q.rbegin() + 1; it != q.rend(); ++it) {
        half.push_back(State{2.0 * T - it->t, it->x, it->y, -it->vx, -it->vy});
    }
    orbit.samples = half;
    for (auto it = half.begin() + 1; it != half.end(); ++it) {
        orbit.samples.push_back(State{2.0 * T + it->t, -it->x, it->y, -it->vx, it->vy});
    }
    orbit.samples.back().t = 4.0 * T;
    orbit.events.push_back(Event{EventKind::TimeLimit, 4.0 * T, orbit.samples.back()});

    // The reflections are only valid if the touch point really is a rest point;
    // integrate the start straight through four quarter periods and demand closure.
    IntegratorSettings full = settings;
    full.t_limit = 4.0 * T;
    const State end = integrate(q.front(), full).back();
    const State& start = q.front();
    const double mismatch = std::hypot(end.x - start.x, end.y - start.y);
    if (!(mismatch <= closure_tol)) {
        throw ClosureFailure("assemble_periodic_orbit: reversed segment misses the start by " +
                             std::to_string(mismatch));
    }
    return orbit;
}

int worker_count()
{
    if (const char* env = std::getenv("LANGMUIR_LAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return omp_get_max_threads();
}

} // namespace langmuir
