#include "langmuir/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace langmuir {

namespace {

void require_upper_half_plane(double x, double y, const char* what)
{
    if (!(y > 0.0)) {
        throw DomainError(std::string(what) + ": requires y > 0, got y = " + std::to_string(y));
    }
    if (x == 0.0 && y == 0.0) {
        throw DomainError(std::string(what) + ": undefined at the nucleus");
    }
}

} // namespace

double potential(double x, double y)
{
    require_upper_half_plane(x, y, "potential");
    return -4.0 / std::hypot(x, y) + 0.5 / y;
}

Acceleration acceleration(double x, double y)
{
    require_upper_half_plane(x, y, "acceleration");
    // Written as (1 - 8 (y/r)^3) / y^2 so that the axis value -7/y^2 is exact.
    const double r = std::sqrt(x * x + y * y);
    const double sin_phi = y / r;
    return {-8.0 * (x / r) / (r * r), (1.0 - 8.0 * sin_phi * sin_phi * sin_phi) / (y * y)};
}

double energy(const State& s)
{
    return 0.25 * s.speed_squared() + potential(s.x, s.y);
}

State initial_state(const ProblemSpec& spec)
{
    if (!(spec.height > 0.0)) {
        throw DomainError("initial_state: height must be positive");
    }
    const double kinetic = 3.5 / spec.height + spec.energy;
    if (!(kinetic > 0.0)) {
        std::ostringstream msg;
        msg << "initial_state: (0, h) must lie strictly inside the Hill region (7/(2h) + E > 0); "
               "admissible heights are (0, "
            << -3.5 / spec.energy << ")";
        throw DomainError(msg.str());
    }
    return State{0.0, 0.0, spec.height, 2.0 * std::sqrt(kinetic), 0.0};
}

double magical_line_residual(double x, double y)
{
    if (!(y > 0.0)) {
        throw DomainError("magical_line_residual: requires y > 0");
    }
    return sqrt3 * y - std::abs(x);
}

bool hill_contains(double energy, double x, double y)
{
    return potential(x, y) <= energy;
}

std::vector<Point> hill_boundary_sample(double energy, int n)
{
    if (!(energy < 0.0)) {
        throw DomainError("hill_boundary_sample: the zero-velocity curve is bounded only for E < 0");
    }
    if (n < 2) {
        throw std::invalid_argument("hill_boundary_sample: need at least two points");
    }
    // V < 0 somewhere on the ray iff sin(theta) > 1/8.
    const double theta_lo = std::asin(0.125);
    const double theta_hi = std::numbers::pi - theta_lo;
    const double dtheta = (theta_hi - theta_lo) / (n + 1);

    const auto solve_ray = [energy](double theta) {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const auto residual = [&](double r) { return potential(r * c, r * s) - energy; };

        double lo = 1.0;
        while (residual(lo) >= 0.0) {
            lo *= 0.5;
            if (lo < 1e-300) {
                throw std::runtime_error("hill_boundary_sample: failed to bracket the inner end");
            }
        }
        double hi = 1.0;
        while (residual(hi) <= 0.0) {
            hi *= 2.0;
            if (hi > 1e300) {
                throw std::runtime_error("hill_boundary_sample: failed to bracket the outer end");
            }
        }
        // V increases monotonically along the ray; bisect down to the last representable bit.
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) {
                break;
            }
            (residual(mid) < 0.0 ? lo : hi) = mid;
        }
        const double r = std::abs(residual(lo)) < std::abs(residual(hi)) ? lo : hi;
        if (std::abs(residual(r)) > 1e-10) {
            throw std::runtime_error("hill_boundary_sample: bisection did not converge");
        }
        return Point{r * c, r * s};
    };

    // Solve the right half (and the apex when n is odd), then mirror.
    std::vector<Point> out(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        const bool apex = 2 * i + 1 == n;
        const Point p = solve_ray(apex ? std::numbers::pi / 2 : theta_lo + (i + 1) * dtheta);
        out[i] = apex ? Point{0.0, p.y} : p;
        out[n - 1 - i] = apex ? out[i] : Point{-p.x, p.y};
    }
    return out;
}

State scale_state(const State& s, double a)
{
    if (!(a > 0.0)) {
        throw DomainError("scale_state: scale factor must be positive");
    }
    const double vscale = 1.0 / std::sqrt(a);
    return State{a * std::sqrt(a) * s.t, a * s.x, a * s.y, vscale * s.vx, vscale * s.vy};
}

State invert_state(const State& s)
{
    require_upper_half_plane(s.x, s.y, "invert_state");
    const double r2 = s.x * s.x + s.y * s.y;
    // 1/conj(q) = q / |q|^2
    const double qx = s.x / r2;
    const double qy = s.y / r2;
    // v -> -q^2 conj(v); q^2 = (x^2 - y^2) + i 2xy, conj(v) = vx - i vy
    const double re_q2 = s.x * s.x - s.y * s.y;
    const double im_q2 = 2.0 * s.x * s.y;
    const double vx = -(re_q2 * s.vx + im_q2 * s.vy);
    const double vy = -(im_q2 * s.vx - re_q2 * s.vy);
    return State{s.t, qx, qy, vx, vy};
}

double inverted_energy(const State& s)
{
    require_upper_half_plane(s.x, s.y, "inverted_energy");
    const double r2 = s.x * s.x + s.y * s.y;
    const double r = std::sqrt(r2);
    return 0.25 * s.speed_squared() - 4.0 / (r2 * r) + 0.5 / (r2 * s.y);
}

Acceleration inverted_acceleration(double x, double y)
{
    require_upper_half_plane(x, y, "inverted_acceleration");
    const double r2 = x * x + y * y;
    const double r = std::sqrt(r2);
    const double inv_r4 = 1.0 / (r2 * r2);
    const double inv_r5 = inv_r4 / r;
    return {-24.0 * x * inv_r5 + 2.0 * x * inv_r4 / y,
            -24.0 * y * inv_r5 + 2.0 * inv_r4 + 1.0 / (r2 * y * y)};
}

PolarState to_polar(const State& s)
{
    if (!(s.y > 0.0)) {
        throw DomainError("to_polar: requires 0 < phi < pi (y > 0)");
    }
    const double r = s.radius();
    return PolarState{s.t, r, std::atan2(s.y, s.x), (s.x * s.px() + s.y * s.py()) / r,
                      s.x * s.py() - s.y * s.px()};
}

State from_polar(const PolarState& p)
{
    const double c = std::cos(p.phi);
    const double s = std::sin(p.phi);
    const double px = p.pr * c - p.pphi * s / p.r;
    const double py = p.pr * s + p.pphi * c / p.r;
    return State{p.t, p.r * c, p.r * s, 2.0 * px, 2.0 * py};
}

double inverted_radial_acceleration(const PolarState& p)
{
    constexpr double degree = -3.0;
    return (2.0 / p.r) * (degree * p.pr * p.pr + (degree + 2.0) * p.pphi * p.pphi / (p.r * p.r));
}

double radial_velocity(const State& s)
{
    return (s.x * s.vx + s.y * s.vy) / s.radius();
}

} // namespace langmuir
