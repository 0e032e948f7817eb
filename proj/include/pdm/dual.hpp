#pragma once

#include <cmath>
#include <sstream>

#include "pdm/errors.hpp"

// Forward-mode automatic differentiation carriers.  Dual tracks a value and
// its first derivative, Dual2 additionally the second derivative.  All
// arithmetic is real; operations that would leave the reals (sqrt of a
// negative, log of a non-positive, pow of a negative base with a fractional
// exponent) raise DomainError instead of producing NaN.

namespace pdm {

struct Dual {
    double v = 0.0;
    double d = 0.0;
};

struct Dual2 {
    double v = 0.0;
    double d = 0.0;
    double dd = 0.0;
};

inline Dual var(double x) { return {x, 1.0}; }
inline Dual2 var2(double x) { return {x, 1.0, 0.0}; }

// ---- Dual arithmetic -------------------------------------------------------

inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
inline Dual operator-(Dual a) { return {-a.v, -a.d}; }
inline Dual operator*(Dual a, Dual b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d};
}
inline Dual operator/(Dual a, Dual b) {
    if (b.v == 0.0) throw DomainError("division by zero");
    const double q = a.v / b.v;
    return {q, (a.d - q * b.d) / b.v};
}

inline Dual operator+(Dual a, double c) { return {a.v + c, a.d}; }
inline Dual operator+(double c, Dual a) { return a + c; }
inline Dual operator-(Dual a, double c) { return {a.v - c, a.d}; }
inline Dual operator-(double c, Dual a) { return {c - a.v, -a.d}; }
inline Dual operator*(Dual a, double c) { return {a.v * c, a.d * c}; }
inline Dual operator*(double c, Dual a) { return a * c; }
inline Dual operator/(Dual a, double c) {
    if (c == 0.0) throw DomainError("division by zero");
    return {a.v / c, a.d / c};
}
inline Dual operator/(double c, Dual a) { return Dual{c, 0.0} / a; }

// ---- Dual2 arithmetic ------------------------------------------------------

inline Dual2 operator+(Dual2 a, Dual2 b) {
    return {a.v + b.v, a.d + b.d, a.dd + b.dd};
}
inline Dual2 operator-(Dual2 a, Dual2 b) {
    return {a.v - b.v, a.d - b.d, a.dd - b.dd};
}
inline Dual2 operator-(Dual2 a) { return {-a.v, -a.d, -a.dd}; }
inline Dual2 operator*(Dual2 a, Dual2 b) {
    return {a.v * b.v, a.d * b.v + a.v * b.d,
            a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
inline Dual2 operator/(Dual2 a, Dual2 b) {
    if (b.v == 0.0) throw DomainError("division by zero");
    const double q = a.v / b.v;
    const double qd = (a.d - q * b.d) / b.v;
    const double qdd = (a.dd - 2.0 * qd * b.d - q * b.dd) / b.v;
    return {q, qd, qdd};
}

inline Dual2 operator+(Dual2 a, double c) { return {a.v + c, a.d, a.dd}; }
inline Dual2 operator+(double c, Dual2 a) { return a + c; }
inline Dual2 operator-(Dual2 a, double c) { return {a.v - c, a.d, a.dd}; }
inline Dual2 operator-(double c, Dual2 a) { return {c - a.v, -a.d, -a.dd}; }
inline Dual2 operator*(Dual2 a, double c) { return {a.v * c, a.d * c, a.dd * c}; }
inline Dual2 operator*(double c, Dual2 a) { return a * c; }
inline Dual2 operator/(Dual2 a, double c) {
    if (c == 0.0) throw DomainError("division by zero");
    return {a.v / c, a.d / c, a.dd / c};
}
inline Dual2 operator/(double c, Dual2 a) { return Dual2{c, 0.0, 0.0} / a; }

// ---- checked scalar math ---------------------------------------------------

namespace smath {

namespace detail {

[[noreturn]] inline void bad(const char* fn, double x) {
    std::ostringstream os;
    os << fn << ": argument " << x << " outside real domain";
    throw DomainError(os.str());
}

inline bool is_integer(double x) {
    return std::isfinite(x) && x == std::nearbyint(x);
}

// Chain rule through a unary function given h(x), h'(x), h''(x) at f.v.
inline Dual chain(Dual f, double h, double hp) {
    return {h, hp * f.d};
}
inline Dual2 chain(Dual2 f, double h, double hp, double hpp) {
    return {h, hp * f.d, hpp * f.d * f.d + hp * f.dd};
}

} // namespace detail

inline double exp(double x) { return std::exp(x); }
inline Dual exp(Dual f) {
    const double e = std::exp(f.v);
    return detail::chain(f, e, e);
}
inline Dual2 exp(Dual2 f) {
    const double e = std::exp(f.v);
    return detail::chain(f, e, e, e);
}

inline double ln(double x) {
    if (x <= 0.0) detail::bad("ln", x);
    return std::log(x);
}
inline Dual ln(Dual f) {
    if (f.v <= 0.0) detail::bad("ln", f.v);
    return detail::chain(f, std::log(f.v), 1.0 / f.v);
}
inline Dual2 ln(Dual2 f) {
    if (f.v <= 0.0) detail::bad("ln", f.v);
    return detail::chain(f, std::log(f.v), 1.0 / f.v, -1.0 / (f.v * f.v));
}

inline double sqrt(double x) {
    if (x < 0.0) detail::bad("sqrt", x);
    return std::sqrt(x);
}
inline Dual sqrt(Dual f) {
    if (f.v <= 0.0) detail::bad("sqrt", f.v);
    const double s = std::sqrt(f.v);
    return detail::chain(f, s, 0.5 / s);
}
inline Dual2 sqrt(Dual2 f) {
    if (f.v <= 0.0) detail::bad("sqrt", f.v);
    const double s = std::sqrt(f.v);
    return detail::chain(f, s, 0.5 / s, -0.25 / (s * f.v));
}

inline double sin(double x) { return std::sin(x); }
inline Dual sin(Dual f) { return detail::chain(f, std::sin(f.v), std::cos(f.v)); }
inline Dual2 sin(Dual2 f) {
    return detail::chain(f, std::sin(f.v), std::cos(f.v), -std::sin(f.v));
}

inline double cos(double x) { return std::cos(x); }
inline Dual cos(Dual f) { return detail::chain(f, std::cos(f.v), -std::sin(f.v)); }
inline Dual2 cos(Dual2 f) {
    return detail::chain(f, std::cos(f.v), -std::sin(f.v), -std::cos(f.v));
}

inline double sinh(double x) { return std::sinh(x); }
inline Dual sinh(Dual f) {
    return detail::chain(f, std::sinh(f.v), std::cosh(f.v));
}
inline Dual2 sinh(Dual2 f) {
    return detail::chain(f, std::sinh(f.v), std::cosh(f.v), std::sinh(f.v));
}

inline double cosh(double x) { return std::cosh(x); }
inline Dual cosh(Dual f) {
    return detail::chain(f, std::cosh(f.v), std::sinh(f.v));
}
inline Dual2 cosh(Dual2 f) {
    return detail::chain(f, std::cosh(f.v), std::sinh(f.v), std::cosh(f.v));
}

inline double asinh(double x) { return std::asinh(x); }
inline Dual asinh(Dual f) {
    const double r = 1.0 + f.v * f.v;
    return detail::chain(f, std::asinh(f.v), 1.0 / std::sqrt(r));
}
inline Dual2 asinh(Dual2 f) {
    const double r = 1.0 + f.v * f.v;
    const double s = std::sqrt(r);
    return detail::chain(f, std::asinh(f.v), 1.0 / s, -f.v / (r * s));
}

inline double abs(double x) { return std::fabs(x); }
inline Dual abs(Dual f) {
    if (f.v == 0.0) throw DomainError("abs: derivative undefined at zero");
    const double s = f.v > 0.0 ? 1.0 : -1.0;
    return detail::chain(f, std::fabs(f.v), s);
}
inline Dual2 abs(Dual2 f) {
    if (f.v == 0.0) throw DomainError("abs: derivative undefined at zero");
    const double s = f.v > 0.0 ? 1.0 : -1.0;
    return detail::chain(f, std::fabs(f.v), s, 0.0);
}

inline double pow(double base, double expo) {
    if (base > 0.0) return std::pow(base, expo);
    if (base == 0.0) {
        if (expo > 0.0) return 0.0;
        throw DomainError("pow: zero base needs a positive exponent");
    }
    if (!detail::is_integer(expo))
        throw DomainError("pow: negative base needs an integer exponent");
    return std::pow(base, expo);
}

inline Dual pow(Dual f, Dual g) {
    if (g.d == 0.0) {
        const double n = g.v;
        if (f.v > 0.0) {
            const double p = std::pow(f.v, n);
            return {p, n * std::pow(f.v, n - 1.0) * f.d};
        }
        if (f.v == 0.0) {
            if (n >= 2.0) return {0.0, 0.0};
            if (n == 1.0) return {0.0, f.d};
            throw DomainError("pow: derivative singular at zero base");
        }
        if (!detail::is_integer(n))
            throw DomainError("pow: negative base needs an integer exponent");
        return {std::pow(f.v, n), n * std::pow(f.v, n - 1.0) * f.d};
    }
    if (f.v <= 0.0)
        throw DomainError("pow: variable exponent needs a positive base");
    const double p = std::pow(f.v, g.v);
    const double lf = std::log(f.v);
    return {p, p * (g.d * lf + g.v * f.d / f.v)};
}

inline Dual2 pow(Dual2 f, Dual2 g) {
    if (g.d == 0.0 && g.dd == 0.0) {
        const double n = g.v;
        if (f.v == 0.0) {
            if (n >= 3.0) return {0.0, 0.0, 0.0};
            if (n == 2.0) return {0.0, 0.0, 2.0 * f.d * f.d};
            if (n == 1.0) return {0.0, f.d, f.dd};
            throw DomainError("pow: derivative singular at zero base");
        }
        if (f.v < 0.0 && !detail::is_integer(n))
            throw DomainError("pow: negative base needs an integer exponent");
        const double p = std::pow(f.v, n);
        const double p1 = n * std::pow(f.v, n - 1.0);
        const double p2 = (n == 0.0 || n == 1.0)
                              ? 0.0
                              : n * (n - 1.0) * std::pow(f.v, n - 2.0);
        return {p, p1 * f.d, p2 * f.d * f.d + p1 * f.dd};
    }
    if (f.v <= 0.0)
        throw DomainError("pow: variable exponent needs a positive base");
    const double p = std::pow(f.v, g.v);
    const double lf = std::log(f.v);
    const double u1 = g.d * lf + g.v * f.d / f.v;
    const double u2 = g.dd * lf + 2.0 * g.d * f.d / f.v +
                      g.v * (f.dd * f.v - f.d * f.d) / (f.v * f.v);
    return {p, p * u1, p * u1 * u1 + p * u2};
}

} // namespace smath
} // namespace pdm
