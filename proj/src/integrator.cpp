#include "langmuir/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace langmuir {

namespace {

using Vec4 = std::array<double, 4>;

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

bool admissible(const Vec4& u)
{
    return u[1] > 0.0 && std::isfinite(u[0]) && std::isfinite(u[1]) && std::isfinite(u[2]) &&
           std::isfinite(u[3]);
}

// Returns nullopt when a stage leaves the upper half plane.
std::optional<Vec4> rhs(const VectorField& field, const Vec4& u)
{
    if (!admissible(u)) {
        return std::nullopt;
    }
    const Acceleration acc = field.accel(u[0], u[1]);
    return Vec4{u[2], u[3], acc.ax, acc.ay};
}

Vec4 combine(const Vec4& u, double h, std::initializer_list<std::pair<double, const Vec4*>> terms)
{
    Vec4 out = u;
    for (const auto& [c, k] : terms) {
        for (int i = 0; i < 4; ++i) {
            out[i] += h * c * (*k)[i];
        }
    }
    return out;
}

struct StepResult {
    Vec4 u;
    double error = 0.0;
    bool ok = false;
};

StepResult dp5_step(const VectorField& field, const Vec4& u, double h, double rel_tol, double abs_tol)
{
    StepResult res;
    const auto k1 = rhs(field, u);
    if (!k1) return res;
    const auto k2 = rhs(field, combine(u, h, {{a21, &*k1}}));
    if (!k2) return res;
    const auto k3 = rhs(field, combine(u, h, {{a31, &*k1}, {a32, &*k2}}));
    if (!k3) return res;
    const auto k4 = rhs(field, combine(u, h, {{a41, &*k1}, {a42, &*k2}, {a43, &*k3}}));
    if (!k4) return res;
    const auto k5 = rhs(field, combine(u, h, {{a51, &*k1}, {a52, &*k2}, {a53, &*k3}, {a54, &*k4}}));
    if (!k5) return res;
    const auto k6 =
        rhs(field, combine(u, h, {{a61, &*k1}, {a62, &*k2}, {a63, &*k3}, {a64, &*k4}, {a65, &*k5}}));
    if (!k6) return res;
    const Vec4 u5 = combine(u, h, {{b1, &*k1}, {b3, &*k3}, {b4, &*k4}, {b5, &*k5}, {b6, &*k6}});
    const auto k7 = rhs(field, u5);
    if (!k7) return res;

    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double err = h * (e1 * (*k1)[i] + e3 * (*k3)[i] + e4 * (*k4)[i] + e5 * (*k5)[i] +
                                e6 * (*k6)[i] + e7 * (*k7)[i]);
        const double scale = abs_tol + rel_tol * std::max(std::abs(u[i]), std::abs(u5[i]));
        sum += (err / scale) * (err / scale);
    }
    res.u = u5;
    res.error = std::sqrt(sum / 4.0);
    res.ok = std::isfinite(res.error);
    return res;
}

Vec4 pack(const State& s) { return {s.x, s.y, s.vx, s.vy}; }
State unpack(double t, const Vec4& u) { return State{t, u[0], u[1], u[2], u[3]}; }

double potential_part(const VectorField& field, const State& s)
{
    State rest = s;
    rest.vx = 0.0;
    rest.vy = 0.0;
    return field.energy(rest);
}

double collision_residual(const State& s, const IntegratorSettings& settings)
{
    return std::min(s.y - settings.y_collision, s.radius() - settings.r_collision);
}

struct Candidate {
    Event event;
    bool stops = false;
};

class Integration {
public:
    Integration(const VectorField& field, const State& s0, const IntegratorSettings& settings, EventMask watch,
                EventMask stop_on, int stop_count)
        : field_(field), settings_(settings), watch_(watch), stop_on_(stop_on), stops_left_(stop_count)
    {
        if (stop_count < 1) {
            throw std::invalid_argument("integrate: stop_count must be at least 1");
        }
        settings_.validate();
        if (!(s0.y > settings_.y_collision) || !(s0.radius() > settings_.r_collision)) {
            throw DomainError("integrate: initial state lies inside the collision cutoff");
        }
        energy0_ = field_.energy(s0);
        if (!std::isfinite(energy0_)) {
            throw DomainError("integrate: initial energy is not finite");
        }
        push_sample(s0);
    }

    Trajectory run()
    {
        State current = traj_.samples.front();
        double dt = std::clamp(1e-3, settings_.h_min, settings_.h_max);
        double err_prev = 1e-4;
        bool rejected_last = false;

        while (true) {
            const double remaining = settings_.t_limit - current.t;
            if (remaining <= 0.0) {
                finish(EventKind::TimeLimit, current, false);
                return std::move(traj_);
            }
            dt = std::min(dt, settings_.h_max);
            bool clamped = false;
            if (dt >= remaining) {
                // The last step may be shorter than h_min; it lands exactly on t_limit.
                dt = remaining;
                clamped = true;
            } else if (dt < settings_.h_min) {
                throw StepUnderflow("integrate: step size fell below h_min at t = " + std::to_string(current.t),
                                    current);
            }

            const StepResult step =
                dp5_step(field_, pack(current), dt, settings_.rel_tol, settings_.abs_tol);
            if (!step.ok || step.error > 1.0) {
                const double fac = step.ok ? std::max(0.2, 0.9 * std::pow(step.error, -0.2)) : 0.25;
                dt *= fac;
                rejected_last = true;
                continue;
            }

            const State next = unpack(clamped ? settings_.t_limit : current.t + dt, step.u);
            if (process_step(current, next)) {
                return std::move(traj_);
            }
            current = next;
            if (clamped) {
                finish(EventKind::TimeLimit, current, false);
                return std::move(traj_);
            }

            // Proportional-integral controller.
            constexpr double alpha = 0.17;
            constexpr double beta = 0.04;
            const double err = std::max(step.error, 1e-10);
            double fac = 0.9 * std::pow(err, -alpha) * std::pow(err_prev, beta);
            fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 10.0);
            dt *= fac;
            err_prev = std::max(step.error, 1e-4);
            rejected_last = false;
        }
    }

private:
    // Returns true when a stopping event ended the integration inside this step.
    bool process_step(const State& a, const State& b)
    {
        std::vector<Candidate> found;
        for (int k = 0; k <= static_cast<int>(EventKind::HillBoundaryTouch); ++k) {
            const auto kind = static_cast<EventKind>(k);
            if (kind == EventKind::CollisionProximity || !watch_.contains(kind)) {
                continue;
            }
            const double ra = event_residual(field_, kind, a, settings_);
            const double rb = event_residual(field_, kind, b, settings_);
            const bool speed_minimum = kind == EventKind::BrakePoint || kind == EventKind::HillBoundaryTouch;
            const bool crossing = speed_minimum ? (ra < 0.0 && rb >= 0.0)
                                                : (ra != 0.0 && (rb == 0.0 || (ra < 0.0) != (rb < 0.0)));
            if (!crossing) {
                continue;
            }
            Event ev = locate(a, b.t, kind, ra);
            if (kind == EventKind::BrakePoint &&
                ev.state.speed_squared() > settings_.brake_speed * settings_.brake_speed) {
                continue;
            }
            if (kind == EventKind::HillBoundaryTouch &&
                energy0_ - potential_part(field_, ev.state) >
                    0.25 * settings_.brake_speed * settings_.brake_speed) {
                continue;
            }
            found.push_back({ev, stop_on_.contains(kind)});
        }
        if (collision_residual(b, settings_) <= 0.0) {
            const double ra = collision_residual(a, settings_);
            found.push_back({locate(a, b.t, EventKind::CollisionProximity, ra), true});
        }
        std::stable_sort(found.begin(), found.end(),
                         [](const Candidate& l, const Candidate& r) { return l.event.t < r.event.t; });

        for (const Candidate& c : found) {
            if (c.stops && (c.event.kind == EventKind::CollisionProximity || --stops_left_ == 0)) {
                push_substeps(a, c.event.t);
                traj_.events.push_back(c.event);
                push_sample(c.event.state);
                traj_.termination = c.event.kind;
                return true;
            }
            traj_.events.push_back(c.event);
        }
        push_substeps(a, b.t);
        push_sample(b);
        return false;
    }

    Event locate(const State& a, double t_end, EventKind kind, double ra)
    {
        const auto f = [&](double tau) { return event_residual(field_, kind, state_at(a, tau), settings_); };
        const double t = bisect_time(f, a.t, t_end, ra, settings_.event_tol);
        return Event{kind, t, state_at(a, t)};
    }

    State state_at(const State& a, double tau) const
    {
        State s = advance(field_, a, tau - a.t, settings_.h_max);
        s.t = tau;
        return s;
    }

    void push_substeps(const State& a, double t_stop)
    {
        if (settings_.substeps <= 0) {
            return;
        }
        const double t_last = traj_.samples.back().t;
        const double span = t_stop - a.t;
        for (int k = 1; k <= settings_.substeps; ++k) {
            const double tau = a.t + span * k / (settings_.substeps + 1);
            if (tau > t_last && tau < t_stop) {
                push_sample(state_at(a, tau));
            }
        }
    }

    void push_sample(const State& s)
    {
        traj_.samples.push_back(s);
        const double de = std::abs(field_.energy(s) - energy0_);
        const double drift = std::abs(energy0_) > 1e-12 ? de / std::abs(energy0_) : de;
        traj_.max_energy_drift = std::max(traj_.max_energy_drift, drift);
    }

    void finish(EventKind kind, const State& s, bool push)
    {
        if (push) {
            push_sample(s);
        }
        traj_.events.push_back(Event{kind, s.t, s});
        traj_.termination = kind;
    }

    const VectorField& field_;
    IntegratorSettings settings_;
    EventMask watch_;
    EventMask stop_on_;
    int stops_left_ = 1;
    double energy0_ = 0.0;
    Trajectory traj_;
};

} // namespace

void IntegratorSettings::validate() const
{
    if (!(rel_tol > 0.0 && abs_tol > 0.0 && h_min > 0.0 && h_max > 0.0 && y_collision > 0.0 &&
          r_collision > 0.0 && t_limit > 0.0 && event_tol > 0.0 && brake_speed > 0.0)) {
        throw std::invalid_argument("IntegratorSettings: all tolerances and limits must be positive");
    }
    if (!(h_min < h_max)) {
        throw std::invalid_argument("IntegratorSettings: h_min must be smaller than h_max");
    }
    if (!(event_tol <= rel_tol)) {
        throw std::invalid_argument("IntegratorSettings: event_tol must not exceed rel_tol");
    }
    if (substeps < 0) {
        throw std::invalid_argument("IntegratorSettings: substeps must be non-negative");
    }
}

std::string_view to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::XVelocityZero: return "XVelocityZero";
    case EventKind::YVelocityZero: return "YVelocityZero";
    case EventKind::MagicalLineCross: return "MagicalLineCross";
    case EventKind::BrakePoint: return "BrakePoint";
    case EventKind::CollisionProximity: return "CollisionProximity";
    case EventKind::HillBoundaryTouch: return "HillBoundaryTouch";
    case EventKind::TimeLimit: return "TimeLimit";
    }
    return "Unknown";
}

EventKind event_kind_from_string(std::string_view name)
{
    for (int k = 0; k <= static_cast<int>(EventKind::TimeLimit); ++k) {
        if (to_string(static_cast<EventKind>(k)) == name) {
            return static_cast<EventKind>(k);
        }
    }
    throw std::invalid_argument("unknown event kind: " + std::string(name));
}

std::vector<Event> Trajectory::events_of(EventKind kind) const
{
    std::vector<Event> out;
    std::copy_if(events.begin(), events.end(), std::back_inserter(out),
                 [kind](const Event& e) { return e.kind == kind; });
    return out;
}

State advance(const VectorField& field, const State& s, double dt, double h_max)
{
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(dt) / h_max)));
    const double h = dt / n;
    Vec4 u = pack(s);
    for (int i = 0; i < n; ++i) {
        const StepResult step = dp5_step(field, u, h, 1.0, 1.0);
        if (!step.ok) {
            throw DomainError("advance: re-integration left the upper half plane");
        }
        u = step.u;
    }
    return unpack(s.t + dt, u);
}

double event_residual(const VectorField& field, EventKind kind, const State& s,
                      const IntegratorSettings& settings)
{
    switch (kind) {
    case EventKind::XVelocityZero: return s.vx;
    case EventKind::YVelocityZero: return s.vy;
    case EventKind::MagicalLineCross: return magical_line_residual(s.x, s.y);
    case EventKind::BrakePoint:
    case EventKind::HillBoundaryTouch: {
        const Acceleration acc = field.accel(s.x, s.y);
        return s.vx * acc.ax + s.vy * acc.ay;
    }
    case EventKind::CollisionProximity: return collision_residual(s, settings);
    case EventKind::TimeLimit: return s.t - settings.t_limit;
    }
    return 0.0;
}

Event locate_event(const std::pair<State, State>& bracket, EventKind kind, const IntegratorSettings& settings,
                   const VectorField& field)
{
    const auto& [a, b] = bracket;
    if (!(b.t > a.t)) {
        throw std::invalid_argument("locate_event: bracket must be ordered in time");
    }
    const double ra = event_residual(field, kind, a, settings);
    const double rb = event_residual(field, kind, b, settings);
    if (ra == 0.0) {
        return Event{kind, a.t, a};
    }
    if (rb != 0.0 && (ra < 0.0) == (rb < 0.0)) {
        throw NoSignChange("locate_event: residual of " + std::string(to_string(kind)) +
                           " does not change sign over the bracket");
    }
    const auto state_at = [&](double tau) {
        State s = advance(field, a, tau - a.t, settings.h_max);
        s.t = tau;
        return s;
    };
    const double t = bisect_time(
        [&](double tau) { return event_residual(field, kind, state_at(tau), settings); }, a.t, b.t, ra,
        settings.event_tol);
    return Event{kind, t, state_at(t)};
}

Trajectory integrate_field(const VectorField& field, const State& s0, const IntegratorSettings& settings,
                           EventMask watch, EventMask stop_on, int stop_count)
{
    return Integration(field, s0, settings, watch | stop_on, stop_on, stop_count).run();
}

Trajectory integrate(const State& s0, const IntegratorSettings& settings, EventMask watch, EventMask stop_on,
                     int stop_count)
{
    return integrate_field(langmuir_field, s0, settings, watch, stop_on, stop_count);
}

Trajectory integrate_inverted(const State& s0, const IntegratorSettings& settings, EventMask watch,
                              EventMask stop_on, int stop_count)
{
    return integrate_field(inverted_field, s0, settings, watch, stop_on, stop_count);
}

} // namespace langmuir
