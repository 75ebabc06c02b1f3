#pragma once

#include "langmuir/integrator.hpp"
#include "langmuir/state.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace langmuir {

/// The trajectory collided or ran out of time before the k-th x-rest.
class NoRest : public std::runtime_error {
public:
    NoRest(const std::string& what, int k) : std::runtime_error(what), rest_index(k) {}
    int rest_index;
};

class BadBracket : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ShootStatus { Ok, NoRest, Failed };

std::string_view to_string(ShootStatus status);

struct ShootResult {
    double h = 0.0;
    /// Time of the first zero of vx.
    double t_h = 0.0;
    /// vy at t_h; zero exactly at a Langmuir orbit.
    double alpha = 0.0;
    State state_at_th;
    int n_magical_crossings = 0;
    double energy_drift = 0.0;
    ShootStatus status = ShootStatus::Ok;
    std::string message;
};

enum class OrbitKind { Langmuir, Brake };

std::string_view to_string(OrbitKind kind);
OrbitKind orbit_kind_from_string(std::string_view name);

/// One iteration of the bracketed root search.
struct BracketStep {
    double h_lo = 0.0;
    double h_hi = 0.0;
    double h_trial = 0.0;
    double alpha_trial = 0.0;
    bool secant = false;

    friend bool operator==(const BracketStep&, const BracketStep&) = default;
};

struct OrbitRecord {
    double energy = -1.0;
    double h_star = 0.0;
    /// Time T from the start to the brake point; the closed orbit has period 4T.
    double quarter_period = 0.0;
    State touch_state;
    double alpha_residual = 0.0;
    OrbitKind kind = OrbitKind::Langmuir;
    /// Index of the x-rest at which the orbit brakes (1 for the Langmuir orbit).
    int reflection_count = 1;
    std::vector<BracketStep> solver_trace;

    friend bool operator==(const OrbitRecord&, const OrbitRecord&) = default;
};

struct RootOptions {
    double alpha_tol = 1e-8;
    int max_iterations = 200;
};

ShootResult shoot(double energy, double h, const IntegratorSettings& settings);

/// vy at the k-th zero of vx. alpha_k(E, h, 1) == shoot(E, h).alpha.
double alpha_k(double energy, double h, int k, const IntegratorSettings& settings);

/// Trajectory of the Langmuir problem up to (and ending at) its k-th x-rest.
Trajectory shoot_trajectory(double energy, double h, int k, const IntegratorSettings& settings);

/// Bisection with secant acceleration on a scalar function with a sign change
/// over [lo, hi]. Stops once |f| <= tol / 10 or the bracket collapses;
/// throws NoConvergence if the final |f| exceeds tol.
template <class F>
std::pair<double, double> bracketed_root(F&& f, double lo, double hi, const RootOptions& options,
                                         std::vector<BracketStep>* trace = nullptr);

OrbitRecord find_langmuir_orbit(double energy, std::pair<double, double> bracket, const IntegratorSettings& settings,
                                const RootOptions& options = {});

/// Smallest k >= 2 for which alpha_k has opposite signs at the bracket ends,
/// or 0 if none does up to k_max.
int classify_reflection_count(double energy, std::pair<double, double> bracket, const IntegratorSettings& settings,
                              int k_max = 8);

OrbitRecord find_brake_orbit(double energy, std::pair<double, double> bracket, int k,
                             const IntegratorSettings& settings, const RootOptions& options = {});

/// The shooting functional over a height grid, parallelized across grid
/// points with OpenMP. Grid order is preserved; failures are recorded per point.
std::vector<ShootResult> scan_alpha(double energy, std::span<const double> h_grid,
                                    const IntegratorSettings& settings);

/// Single-threaded reference for scan_alpha. Results are bit-identical.
std::vector<ShootResult> scan_alpha_serial(double energy, std::span<const double> h_grid,
                                           const IntegratorSettings& settings);

/// Consecutive successful grid points whose alpha values differ in sign.
std::vector<std::pair<double, double>> sign_change_brackets(std::span<const ShootResult> scan);

/// Inserts grid midpoints inside every sign-change bracket, `levels` times.
std::vector<ShootResult> refine_scan(double energy, std::vector<ShootResult> scan, int levels,
                                     const IntegratorSettings& settings);

std::vector<double> uniform_grid(double lo, double hi, int n);

/// 50 points on [0.05, 3.45] scaled to the energy (heights scale as -1/E).
std::vector<double> default_scan_grid(double energy = -1.0);
std::pair<double, double> default_langmuir_bracket(double energy);
std::pair<double, double> default_brake_bracket(double energy);

class ClosureFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed orbit over [0, 4T]: the quarter run, its time reversal back to the
/// start, and the mirror image in x of that half. Checks the reversal against
/// an independent re-integration from the touch point.
Trajectory assemble_periodic_orbit(const OrbitRecord& record, const IntegratorSettings& settings,
                                   double closure_tol = 1e-6);

/// Number of worker threads: LANGMUIR_LAB_THREADS when set, else the OpenMP default.
int worker_count();

// ---------------------------------------------------------------------------

template <class F>
std::pair<double, double> bracketed_root(F&& f, double lo, double hi, const RootOptions& options,
                                         std::vector<BracketStep>* trace)
{
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) {
        return {lo, f_lo};
    }
    if (f_hi == 0.0) {
        return {hi, f_hi};
    }
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
        throw BadBracket("bracketed_root: no sign change over [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    }
    // The two most recent iterates feed the secant step.
    double x_prev = lo, f_prev = f_lo;
    double x_last = hi, f_last = f_hi;
    double best_x = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
    double best_f = std::abs(f_lo) < std::abs(f_hi) ? f_lo : f_hi;
    double width_before = hi - lo;

    for (int it = 0; it < options.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        double x = mid;
        bool secant = false;
        if (f_last != f_prev) {
            const double s = x_last - f_last * (x_last - x_prev) / (f_last - f_prev);
            // Fall back to bisection when the secant overshoots or the bracket stalls.
            if (s > lo && s < hi && (hi - lo) < 0.75 * width_before) {
                x = s;
                secant = true;
            }
        }
        width_before = hi - lo;
        if (x <= lo || x >= hi) {
            break;
        }
        const double fx = f(x);
        if (trace != nullptr) {
            trace->push_back({lo, hi, x, fx, secant});
        }
        if (std::abs(fx) < std::abs(best_f)) {
            best_x = x;
            best_f = fx;
        }
        if (std::abs(fx) <= 0.1 * options.alpha_tol || fx == 0.0) {
            break;
        }
        if ((fx < 0.0) == (f_lo < 0.0)) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        x_prev = x_last;
        f_prev = f_last;
        x_last = x;
        f_last = fx;
    }
    if (!(std::abs(best_f) <= options.alpha_tol)) {
        throw NoConvergence("bracketed_root: residual " + std::to_string(best_f) + " above tolerance after " +
                            std::to_string(options.max_iterations) + " iterations");
    }
    return {best_x, best_f};
}

} // namespace langmuir
