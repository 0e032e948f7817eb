#pragma once

#include <cmath>
#include <sstream>
#include <vector>

#include "pdm/errors.hpp"

namespace pdm {

// Which coordinate a grid or operator lives on: the physical coordinate x
// or the target coordinate q reached by integrating the mass root.
enum class Coord { X, Q };

inline const char* coord_name(Coord c) { return c == Coord::X ? "x" : "q"; }

// Uniform grid of n interior nodes on [lo, hi] with hard-wall (Dirichlet)
// boundaries.  The endpoints themselves carry no unknowns: node i sits at
// lo + (i+1)h with h = (hi-lo)/(n+1).
struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int n = 0;
    Coord coord = Coord::X;

    double h() const noexcept { return (hi - lo) / (n + 1); }
    double point(int i) const noexcept { return lo + (i + 1) * h(); }

    std::vector<double> points() const {
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = point(i);
        return p;
    }
};

inline Grid make_grid(double lo, double hi, int n, Coord coord = Coord::X) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
        std::ostringstream os;
        os << "grid: endpoints [" << lo << ", " << hi
           << "] must be finite with hi > lo";
        throw ConfigError(os.str());
    }
    if (n < 16) {
        std::ostringstream os;
        os << "grid: need at least 16 interior points, got " << n;
        throw ConfigError(os.str());
    }
    return Grid{lo, hi, n, coord};
}

} // namespace pdm
