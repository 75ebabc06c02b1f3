#pragma once

#include "langmuir/state.hpp"

#include <numbers>
#include <utility>
#include <vector>

namespace langmuir {

inline constexpr double sqrt3 = std::numbers::sqrt3;

/// Heliumlike potential restricted to y > 0: nucleus attraction of both
/// electrons plus their mutual repulsion across the symmetry axis.
double potential(double x, double y);

struct Acceleration {
    double ax = 0.0;
    double ay = 0.0;
};

/// Right-hand side of the second-order equations of motion.
Acceleration acceleration(double x, double y);

/// E = |v|^2 / 4 + V(x, y).
double energy(const State& s);

/// Starts on the symmetry axis at height h moving horizontally to the right
/// with the speed fixed by the energy. Rejects a zero initial speed.
State initial_state(const ProblemSpec& spec);

/// sqrt(3) * y - |x|. Positive above the line on which the vertical force
/// vanishes, where the vertical acceleration is negative.
double magical_line_residual(double x, double y);

/// True iff V(x, y) <= E.
bool hill_contains(double energy, double x, double y);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Samples the zero-velocity curve {V = E} (E < 0) at n polar angles.
///
/// The curve leaves the origin at polar angle asin(1/8) and returns to it at
/// pi - asin(1/8). Angles are spaced uniformly in the open interval, so the
/// set is mirror symmetric and contains the apex (0, -7/(2E)) when n is odd.
/// Along each ray the radius is found by bracketed bisection.
std::vector<Point> hill_boundary_sample(double energy, int n);

/// Conformally symplectic rescaling: positions * a, velocities / sqrt(a),
/// time * a^{3/2}. Maps energy-E solutions onto energy-E/a solutions.
State scale_state(const State& s, double a);

/// Circle inversion q -> 1/conj(q) with the cotangent lift
/// p -> -q^2 conj(p), written in complex notation q = x + i y.
State invert_state(const State& s);

/// Hamiltonian of the inverted chart (|q|^{-4} times the transformed
/// Langmuir Hamiltonian): |p|^2 - 4/|q|^3 + 1/(2 |q|^2 Im q).
double inverted_energy(const State& s);

/// Acceleration of the inverted-chart flow (q' = 2p, p' = -grad V~).
Acceleration inverted_acceleration(double x, double y);

PolarState to_polar(const State& s);
State from_polar(const PolarState& p);

/// Closed-form radial acceleration of the inverted flow on its zero-energy
/// level: (2/r) (-3 pr^2 - pphi^2 / r^2).
double inverted_radial_acceleration(const PolarState& p);

/// dr/dt in whichever chart the state lives in: (x vx + y vy) / r.
double radial_velocity(const State& s);

} // namespace langmuir
