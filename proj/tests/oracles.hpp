#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's dynamics, so agreement is evidence rather than tautology.

#include <array>
#include <cmath>
#include <numbers>

namespace oracle {

using Vec4 = std::array<double, 4>; // x, y, vx, vy

inline Vec4 rhs(const Vec4& u)
{
    const double x = u[0], y = u[1];
    const double r3 = std::pow(x * x + y * y, 1.5);
    return {u[2], u[3], -8.0 * x / r3, -8.0 * y / r3 + 1.0 / (y * y)};
}

/// Classical fourth-order Runge-Kutta with a fixed step; the final step is
/// shortened so the run ends exactly at t_end.
inline Vec4 rk4(Vec4 u, double t_end, double dt = 1e-5)
{
    const long n = static_cast<long>(std::floor(t_end / dt));
    const auto step = [](const Vec4& s, double h) {
        const auto add = [](Vec4 a, const Vec4& b, double c) {
            for (int i = 0; i < 4; ++i) a[i] += c * b[i];
            return a;
        };
        const Vec4 k1 = rhs(s);
        const Vec4 k2 = rhs(add(s, k1, h / 2));
        const Vec4 k3 = rhs(add(s, k2, h / 2));
        const Vec4 k4 = rhs(add(s, k3, h));
        Vec4 out = s;
        for (int i = 0; i < 4; ++i) out[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        return out;
    };
    for (long i = 0; i < n; ++i) u = step(u, dt);
    const double rest = t_end - n * dt;
    if (rest > 0.0) u = step(u, rest);
    return u;
}

inline double potential(double x, double y) { return -4.0 / std::hypot(x, y) + 1.0 / (2.0 * y); }

inline double energy(const Vec4& u) { return (u[2] * u[2] + u[3] * u[3]) / 4.0 + potential(u[0], u[1]); }

/// Radius of the zero-velocity curve along polar angle theta: V = f(theta) / r.
inline double hill_radius(double energy, double theta)
{
    return (-4.0 + 1.0 / (2.0 * std::sin(theta))) / energy;
}

inline Vec4 langmuir_start(double energy, double h) { return {0.0, h, 2.0 * std::sqrt(3.5 / h + energy), 0.0}; }

inline double t_max() { return std::numbers::pi / (2.0 * std::sqrt(8.0 / std::pow(24.5, 1.5))); }

} // namespace oracle
