#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace langmuir {

/// Phase-space point of the reduced (mirror-symmetric) two-electron problem.
///
/// Velocities are stored, not momenta. The Hamiltonian has kinetic term |p|^2,
/// so q' = 2p and the momentum is recovered as v / 2.
struct State {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;

    double px() const { return 0.5 * vx; }
    double py() const { return 0.5 * vy; }
    double radius() const { return std::hypot(x, y); }
    double speed_squared() const { return vx * vx + vy * vy; }
    double speed() const { return std::sqrt(speed_squared()); }

    friend bool operator==(const State&, const State&) = default;
};

/// Energy and starting height of a Langmuir initial-value problem.
struct ProblemSpec {
    double energy = -1.0;
    double height = 1.0;
};

/// Polar chart (r, phi) with conjugate momenta.
struct PolarState {
    double t = 0.0;
    double r = 0.0;
    double phi = 0.0;
    double pr = 0.0;
    double pphi = 0.0;
};

/// Raised when an argument lies outside the physical domain (y <= 0, the
/// nucleus, an empty initial speed, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace langmuir
