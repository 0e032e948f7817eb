#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "pdm/errors.hpp"
#include "pdm/profiles.hpp"

namespace pdm {

struct TrajectoryPoint {
    double t = 0.0;
    double x = 0.0;
    double v = 0.0;
    double energy = 0.0;
    double pseudo_momentum = 0.0;
};

// Integration output.  A trajectory that left the profile domain carries
// the points computed up to the last valid state plus a note saying where
// it stopped.
struct Trajectory {
    std::vector<TrajectoryPoint> points;
    bool domain_exit = false;
    std::string note;
};

// Newton equation with position-dependent inertia: the force balances both
// the potential gradient and the mass gradient, giving
//   xdd = (-V'(x) - m'(x) v^2 / 2) / m(x).
inline double acceleration(const MassProfile& p, const Potential& V, double x,
                           double v) {
    const Dual m = p.dm(x);
    if (!(m.v > 0.0)) {
        throw DomainError("acceleration: mass vanished at x = " +
                          std::to_string(x));
    }
    const Dual w = V.dual(x);
    return (-w.d - 0.5 * m.d * v * v) / m.v;
}

namespace classical_detail {

inline TrajectoryPoint sample(const MassProfile& p, const Potential& V,
                              double t, double x, double v) {
    TrajectoryPoint pt;
    pt.t = t;
    pt.x = x;
    pt.v = v;
    const double m = p.m(x);
    pt.energy = 0.5 * m * v * v + V(x);
    pt.pseudo_momentum = std::sqrt(m) * v;
    return pt;
}

} // namespace classical_detail

// Classic fixed-step fourth-order Runge-Kutta on (x, v).  Fixed step keeps
// the output byte-reproducible; desk-scale trajectories do not need
// adaptivity.
inline Trajectory integrate(const MassProfile& p, const Potential& V,
                            double x0, double v0, double dt, int steps) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw ConfigError("integrate: dt must be positive and finite");
    if (steps < 1) throw ConfigError("integrate: need at least one step");

    Trajectory out;
    out.points.reserve(static_cast<std::size_t>(steps) + 1);

    double x = x0;
    double v = v0;
    out.points.push_back(classical_detail::sample(p, V, 0.0, x, v));

    for (int i = 0; i < steps; ++i) {
        double nx, nv;
        try {
            const double a1 = acceleration(p, V, x, v);
            const double x2 = x + 0.5 * dt * v;
            const double v2 = v + 0.5 * dt * a1;
            const double a2 = acceleration(p, V, x2, v2);
            const double x3 = x + 0.5 * dt * v2;
            const double v3 = v + 0.5 * dt * a2;
            const double a3 = acceleration(p, V, x3, v3);
            const double x4 = x + dt * v3;
            const double v4 = v + dt * a3;
            const double a4 = acceleration(p, V, x4, v4);
            nx = x + dt / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4);
            nv = v + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            const double t = dt * (i + 1);
            out.points.push_back(classical_detail::sample(p, V, t, nx, nv));
        } catch (const DomainError& e) {
            out.domain_exit = true;
            out.note = std::string("stopped after ") +
                       std::to_string(i) + " of " + std::to_string(steps) +
                       " steps: " + e.what();
            break;
        }
        x = nx;
        v = nv;
    }
    return out;
}

} // namespace pdm
