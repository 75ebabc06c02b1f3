#pragma once

#include "langmuir/dynamics.hpp"
#include "langmuir/state.hpp"

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace langmuir {

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_min = 1e-14;
    double h_max = 0.1;
    /// Electron-electron cutoff: stop once y <= y_collision.
    double y_collision = 1e-6;
    /// Electron-nucleus cutoff: stop once r <= r_collision.
    double r_collision = 1e-6;
    double t_limit = 100.0;
    double event_tol = 1e-12;
    /// A local speed minimum below this counts as a brake point.
    double brake_speed = 1e-6;
    /// Extra samples recorded inside every accepted step.
    int substeps = 0;

    /// Throws std::invalid_argument when the settings are inconsistent.
    void validate() const;
};

enum class EventKind : std::uint8_t {
    XVelocityZero,
    YVelocityZero,
    MagicalLineCross,
    BrakePoint,
    CollisionProximity,
    HillBoundaryTouch,
    TimeLimit,
};

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view name);

/// Small bit set over EventKind.
class EventMask {
public:
    constexpr EventMask() = default;
    constexpr EventMask(std::initializer_list<EventKind> kinds)
    {
        for (EventKind k : kinds) {
            bits_ |= bit(k);
        }
    }

    constexpr bool contains(EventKind k) const { return (bits_ & bit(k)) != 0; }
    constexpr EventMask operator|(EventMask other) const { return from_bits(bits_ | other.bits_); }
    constexpr bool empty() const { return bits_ == 0; }

private:
    static constexpr std::uint32_t bit(EventKind k) { return 1u << static_cast<unsigned>(k); }
    static constexpr EventMask from_bits(std::uint32_t b)
    {
        EventMask m;
        m.bits_ = b;
        return m;
    }

    std::uint32_t bits_ = 0;
};

struct Event {
    EventKind kind = EventKind::TimeLimit;
    double t = 0.0;
    State state;
};

struct Trajectory {
    std::vector<State> samples;
    std::vector<Event> events;
    double max_energy_drift = 0.0;
    EventKind termination = EventKind::TimeLimit;

    /// Events of one kind, in time order.
    std::vector<Event> events_of(EventKind kind) const;
    const State& back() const { return samples.back(); }
};

/// Thrown when the step controller needs a step below h_min; carries the last
/// state that was accepted.
class StepUnderflow : public std::runtime_error {
public:
    StepUnderflow(const std::string& what, const State& last) : std::runtime_error(what), last_state(last) {}
    State last_state;
};

/// Thrown by locate_event when the residual does not change sign.
class NoSignChange : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Second-order vector field together with its conserved energy.
struct VectorField {
    Acceleration (*accel)(double, double);
    double (*energy)(const State&);
};

inline constexpr VectorField langmuir_field{&acceleration, &energy};
inline constexpr VectorField inverted_field{&inverted_acceleration, &inverted_energy};

/// Integrates the equations of motion forward from s0 with an adaptive
/// Dormand-Prince 5(4) pair. Every watched event is localized by bisection
/// and recorded; integration ends at the first event in `stop_on`, at the
/// collision cutoffs, or at t_limit. With stop_count > 1 the integration
/// continues through the first stop_count - 1 stopping events.
Trajectory integrate(const State& s0, const IntegratorSettings& settings, EventMask watch = {},
                     EventMask stop_on = {}, int stop_count = 1);

/// Same machinery applied to the circle-inverted chart.
Trajectory integrate_inverted(const State& s0, const IntegratorSettings& settings, EventMask watch = {},
                              EventMask stop_on = {}, int stop_count = 1);

Trajectory integrate_field(const VectorField& field, const State& s0, const IntegratorSettings& settings,
                           EventMask watch, EventMask stop_on, int stop_count = 1);

/// Advances `s` by `dt` (possibly negative) with fixed Dormand-Prince steps of
/// at most h_max. Used for re-integration inside an accepted step.
State advance(const VectorField& field, const State& s, double dt, double h_max);

/// Defining residual of an event kind. Brake and Hill-touch events share the
/// residual v . a, whose minus-to-plus crossing marks a speed minimum.
double event_residual(const VectorField& field, EventKind kind, const State& s,
                      const IntegratorSettings& settings);

/// Localizes the zero of `kind`'s residual between the bracket's states by
/// bisection in time, re-integrating from bracket.first for each trial.
Event locate_event(const std::pair<State, State>& bracket, EventKind kind, const IntegratorSettings& settings,
                   const VectorField& field = langmuir_field);

/// Bisection on a scalar function of time with f(a), f(b) of opposite sign
/// (or f(b) == 0). Returns the end of the final bracket on b's side, so the
/// returned time is never before the root.
template <class F>
double bisect_time(F&& f, double a, double b, double fa, double tol)
{
    while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) {
            break;
        }
        const double fm = f(mid);
        if ((fm < 0.0) == (fa < 0.0) && fm != 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return b;
}

} // namespace langmuir
