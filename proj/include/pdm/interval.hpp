#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "pdm/errors.hpp"

namespace pdm {

// Open interval (lo, hi) on the extended real line.  Endpoints may be
// +/-infinity.  Used to describe where a mass or deformation profile is
// defined; all evaluation is done strictly inside, never at the endpoints.
struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const noexcept { return x > lo && x < hi; }

    bool bounded_below() const noexcept { return std::isfinite(lo); }
    bool bounded_above() const noexcept { return std::isfinite(hi); }
    bool is_whole_line() const noexcept {
        return !bounded_below() && !bounded_above();
    }

    // Midpoint of the finite part, clipping infinite ends to +/-clip.
    double clipped_midpoint(double clip = 64.0) const noexcept {
        const double a = bounded_below() ? lo : -clip;
        const double b = bounded_above() ? hi : clip;
        return 0.5 * (a + b);
    }

    std::string str() const {
        std::ostringstream os;
        os << "(";
        if (bounded_below()) os << lo; else os << "-inf";
        os << ", ";
        if (bounded_above()) os << hi; else os << "inf";
        os << ")";
        return os.str();
    }
};

inline Interval whole_line() { return Interval{}; }

inline void require_inside(const Interval& iv, double x, const char* what) {
    if (!iv.contains(x)) {
        std::ostringstream os;
        os << what << ": point " << x << " outside domain " << iv.str();
        throw DomainError(os.str());
    }
}

} // namespace pdm
