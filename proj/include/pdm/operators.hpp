#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <utility>
#include <vector>

#include "pdm/coord.hpp"
#include "pdm/errors.hpp"
#include "pdm/grid.hpp"
#include "pdm/profiles.hpp"

namespace pdm {

// Mass-power ordering exponents (a, b) of the factored kinetic term
// -1/2 m^a d/dx m^2b d/dx m^a, constrained to a + b = -1/2 so the kinetic
// term carries total mass power -1.  Ladder-operator closure additionally
// forces a = b = -1/4; other admissible pairs are kept constructible to
// demonstrate how the closure fails for them.
struct OrderingParams {
    double a = -0.25;
    double b = -0.25;
};

inline void require_closure_constraint(const OrderingParams& o) {
    if (std::fabs(o.a + o.b + 0.5) > 1e-12) {
        std::ostringstream os;
        os << "ordering (a, b) = (" << o.a << ", " << o.b
           << ") violates a + b = -1/2";
        throw ConfigError(os.str());
    }
}

inline OrderingParams ordering_from_a(double a) {
    return OrderingParams{a, -0.5 - a};
}

struct OscillatorConfig {
    double omega = 1.0;
    double lo = -10.0;
    double hi = 10.0;
    int n = 1000;
    OrderingParams ordering{};

    Grid grid(Coord c = Coord::X) const { return make_grid(lo, hi, n, c); }
};

inline void validate(const OscillatorConfig& cfg) {
    if (!(cfg.omega > 0.0)) {
        std::ostringstream os;
        os << "oscillator config: omega must be > 0, got " << cfg.omega;
        throw ConfigError(os.str());
    }
    make_grid(cfg.lo, cfg.hi, cfg.n); // validates bounds and n >= 16
    require_closure_constraint(cfg.ordering);
}

// Real banded matrix over the interior nodes of a uniform grid, rows
// row-major with 2*band+1 slots each; slot (i, k) holds entry (i, i+k).
// Entries whose column falls outside [0, n) are identically zero, which
// realizes hard-wall (Dirichlet) truncation.
class GridOperator {
public:
    GridOperator(Grid grid, int band, bool symmetric = false)
        : grid_(grid), band_(band), symmetric_(symmetric) {
        if (band < 0 || band > grid.n - 1) {
            std::ostringstream os;
            os << "operator band " << band << " invalid for n = " << grid.n;
            throw ConfigError(os.str());
        }
        w_.assign(static_cast<std::size_t>(grid.n) *
                      static_cast<std::size_t>(2 * band + 1),
                  0.0);
    }

    static GridOperator identity(const Grid& g) {
        GridOperator out(g, 0, true);
        for (int i = 0; i < g.n; ++i) out.at(i, 0) = 1.0;
        return out;
    }

    static GridOperator diagonal(const Grid& g, const std::vector<double>& d) {
        if (static_cast<int>(d.size()) != g.n)
            throw ConfigError("diagonal: value count does not match grid");
        GridOperator out(g, 0, true);
        for (int i = 0; i < g.n; ++i)
            out.at(i, 0) = d[static_cast<std::size_t>(i)];
        return out;
    }

    static GridOperator diagonal(const Grid& g,
                                 const std::function<double(double)>& f) {
        GridOperator out(g, 0, true);
        for (int i = 0; i < g.n; ++i) out.at(i, 0) = f(g.point(i));
        return out;
    }

    const Grid& grid() const { return grid_; }
    int band() const { return band_; }
    bool symmetric() const { return symmetric_; }
    void set_symmetric(bool s) { symmetric_ = s; }

    double& at(int i, int k) {
        return w_[static_cast<std::size_t>(i) *
                      static_cast<std::size_t>(2 * band_ + 1) +
                  static_cast<std::size_t>(k + band_)];
    }
    double at(int i, int k) const {
        return w_[static_cast<std::size_t>(i) *
                      static_cast<std::size_t>(2 * band_ + 1) +
                  static_cast<std::size_t>(k + band_)];
    }

    // Dense-style accessor; zero outside the band or the matrix.
    double entry(int i, int j) const {
        if (i < 0 || i >= grid_.n || j < 0 || j >= grid_.n) return 0.0;
        const int k = j - i;
        if (k < -band_ || k > band_) return 0.0;
        return at(i, k);
    }

    std::vector<double> apply(const std::vector<double>& v) const {
        if (static_cast<int>(v.size()) != grid_.n)
            throw ConfigError("apply: vector length does not match grid");
        std::vector<double> out(static_cast<std::size_t>(grid_.n), 0.0);
        for (int i = 0; i < grid_.n; ++i) {
            double s = 0.0;
            const int k0 = std::max(-band_, -i);
            const int k1 = std::min(band_, grid_.n - 1 - i);
            for (int k = k0; k <= k1; ++k)
                s += at(i, k) * v[static_cast<std::size_t>(i + k)];
            out[static_cast<std::size_t>(i)] = s;
        }
        return out;
    }

    double max_abs_entry() const {
        double m = 0.0;
        for (int i = 0; i < grid_.n; ++i) {
            const int k0 = std::max(-band_, -i);
            const int k1 = std::min(band_, grid_.n - 1 - i);
            for (int k = k0; k <= k1; ++k)
                m = std::max(m, std::fabs(at(i, k)));
        }
        return m;
    }

    // Within-band symmetry to a relative tolerance of the largest entry.
    bool is_numerically_symmetric(double rel = 1e-12) const {
        const double scale = max_abs_entry();
        for (int i = 0; i < grid_.n; ++i) {
            const int k1 = std::min(band_, grid_.n - 1 - i);
            for (int k = 1; k <= k1; ++k)
                if (std::fabs(at(i, k) - at(i + k, -k)) > rel * scale)
                    return false;
        }
        return true;
    }

private:
    Grid grid_;
    int band_ = 0;
    bool symmetric_ = false;
    std::vector<double> w_;
};

namespace op_detail {

inline void require_same_grid(const GridOperator& a, const GridOperator& b,
                              const char* what) {
    const Grid& ga = a.grid();
    const Grid& gb = b.grid();
    if (ga.lo != gb.lo || ga.hi != gb.hi || ga.n != gb.n ||
        ga.coord != gb.coord) {
        std::ostringstream os;
        os << what << ": operators live on different grids";
        throw ConfigError(os.str());
    }
}

// Every sample the stencils can touch must be evaluable: nodes for
// diagonal factors, half-step midpoints for the divergence-form kinetic
// weights.
inline void require_profile_covers(const MassProfile& p, const Grid& g) {
    const double h = g.h();
    const Interval& dom = p.domain();
    if (!dom.contains(g.lo + 0.5 * h) || !dom.contains(g.hi - 0.5 * h)) {
        std::ostringstream os;
        os << "grid [" << g.lo << ", " << g.hi << "] leaves the domain "
           << dom.str() << " of mass profile '" << p.name() << "'";
        throw DomainError(os.str());
    }
}

} // namespace op_detail

inline GridOperator add(const GridOperator& a, const GridOperator& b) {
    op_detail::require_same_grid(a, b, "add");
    const int band = std::max(a.band(), b.band());
    GridOperator out(a.grid(), band, a.symmetric() && b.symmetric());
    const int n = a.grid().n;
    for (int i = 0; i < n; ++i) {
        const int k0 = std::max(-band, -i);
        const int k1 = std::min(band, n - 1 - i);
        for (int k = k0; k <= k1; ++k)
            out.at(i, k) = a.entry(i, i + k) + b.entry(i, i + k);
    }
    return out;
}

inline GridOperator sub(const GridOperator& a, const GridOperator& b) {
    op_detail::require_same_grid(a, b, "sub");
    const int band = std::max(a.band(), b.band());
    GridOperator out(a.grid(), band, a.symmetric() && b.symmetric());
    const int n = a.grid().n;
    for (int i = 0; i < n; ++i) {
        const int k0 = std::max(-band, -i);
        const int k1 = std::min(band, n - 1 - i);
        for (int k = k0; k <= k1; ++k)
            out.at(i, k) = a.entry(i, i + k) - b.entry(i, i + k);
    }
    return out;
}

inline GridOperator scale(const GridOperator& a, double s) {
    GridOperator out = a;
    const int n = a.grid().n;
    for (int i = 0; i < n; ++i) {
        const int k0 = std::max(-a.band(), -i);
        const int k1 = std::min(a.band(), n - 1 - i);
        for (int k = k0; k <= k1; ++k) out.at(i, k) *= s;
    }
    return out;
}

// Exact banded product; the result band is the sum of the factor bands
// (clamped to the matrix size).
inline GridOperator compose(const GridOperator& a, const GridOperator& b) {
    op_detail::require_same_grid(a, b, "compose");
    const int n = a.grid().n;
    const int band = std::min(a.band() + b.band(), n - 1);
    GridOperator out(a.grid(), band, false);
    for (int i = 0; i < n; ++i) {
        const int j0 = std::max(0, i - band);
        const int j1 = std::min(n - 1, i + band);
        for (int j = j0; j <= j1; ++j) {
            double s = 0.0;
            const int m0 = std::max({0, i - a.band(), j - b.band()});
            const int m1 = std::min({n - 1, i + a.band(), j + b.band()});
            for (int m = m0; m <= m1; ++m)
                s += a.entry(i, m) * b.entry(m, j);
            out.at(i, j - i) = s;
        }
    }
    return out;
}

inline GridOperator commutator(const GridOperator& a, const GridOperator& b) {
    return sub(compose(a, b), compose(b, a));
}

inline std::vector<double> apply(const GridOperator& a,
                                 const std::vector<double>& v) {
    return a.apply(v);
}

// Largest magnitude over interior components, excluding `margin` nodes at
// each wall where Dirichlet truncation dominates.
inline double interior_max_abs(const std::vector<double>& v, int margin) {
    const int n = static_cast<int>(v.size());
    double m = 0.0;
    for (int i = margin; i < n - margin; ++i)
        m = std::max(m, std::fabs(v[static_cast<std::size_t>(i)]));
    return m;
}

// ---- first-order factors -----------------------------------------------------

inline GridOperator central_difference(const Grid& g) {
    GridOperator out(g, 1, false);
    const double c = 1.0 / (2.0 * g.h());
    for (int i = 0; i < g.n; ++i) {
        if (i + 1 < g.n) out.at(i, 1) = c;
        if (i - 1 >= 0) out.at(i, -1) = -c;
    }
    return out;
}

// Real part of the mass-deformed momentum: d/dx - m'/(4m).  The physical
// momentum is -i times this operator, so every identity below is checked
// in real arithmetic.
inline GridOperator momentum_pi(const MassProfile& p, const Grid& g) {
    op_detail::require_profile_covers(p, g);
    GridOperator out = central_difference(g);
    for (int i = 0; i < g.n; ++i) {
        const Dual m = p.dm(g.point(i));
        out.at(i, 0) = -m.d / (4.0 * m.v);
    }
    return out;
}

// ---- kinetic terms ------------------------------------------------------------

// -1/2 m^a d/dx m^2b d/dx m^a in divergence form: node weights f = m^a,
// midpoint weights g_w = m^2b.  The symmetric 3-point stencil keeps the
// assembled matrix exactly symmetric for every admissible (a, b).
inline GridOperator kinetic_vonroos(const MassProfile& p, const Grid& g,
                                    const OrderingParams& ord) {
    require_closure_constraint(ord);
    op_detail::require_profile_covers(p, g);
    const int n = g.n;
    const double h = g.h();
    const double inv2h2 = 1.0 / (2.0 * h * h);

    std::vector<double> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        f[static_cast<std::size_t>(i)] = std::pow(p.m(g.point(i)), ord.a);
    std::vector<double> gw(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        gw[static_cast<std::size_t>(i)] =
            std::pow(p.m(g.lo + (i + 0.5) * h), 2.0 * ord.b);

    GridOperator out(g, 1, true);
    for (int i = 0; i < n; ++i) {
        const double fi = f[static_cast<std::size_t>(i)];
        const double gl = gw[static_cast<std::size_t>(i)];
        const double gr = gw[static_cast<std::size_t>(i) + 1];
        out.at(i, 0) = fi * fi * (gl + gr) * inv2h2;
        if (i + 1 < n) {
            const double off =
                -fi * f[static_cast<std::size_t>(i) + 1] * gr * inv2h2;
            out.at(i, 1) = off;
            out.at(i + 1, -1) = off;
        }
    }
    return out;
}

inline GridOperator kinetic_T1(const MassProfile& p, const Grid& g) {
    return kinetic_vonroos(p, g, OrderingParams{-0.25, -0.25});
}

// ---- Hamiltonians --------------------------------------------------------------

// H1 = T1 + V(x), the uniquely ordered position-space Hamiltonian.
inline GridOperator hamiltonian_H1(const MassProfile& p, const Grid& g,
                                   const OscillatorConfig& cfg,
                                   const std::function<double(double)>& V) {
    validate(cfg);
    GridOperator out = kinetic_T1(p, g);
    for (int i = 0; i < g.n; ++i) out.at(i, 0) += V(g.point(i));
    return out;
}

// Constant-mass image -1/2 d^2/dq^2 + V(q) on a grid in the target
// coordinate.
inline GridOperator hamiltonian_H2_on_q(const OscillatorConfig& cfg,
                                        const std::function<double(double)>& V,
                                        const Grid& gq) {
    validate(cfg);
    const double h = gq.h();
    const double invh2 = 1.0 / (h * h);
    GridOperator out(gq, 1, true);
    for (int i = 0; i < gq.n; ++i) {
        out.at(i, 0) = invh2 + V(gq.point(i));
        if (i + 1 < gq.n) {
            out.at(i, 1) = -0.5 * invh2;
            out.at(i + 1, -1) = -0.5 * invh2;
        }
    }
    return out;
}

// Alternative position-space form -1/2 (1/sqrt(m)) d/dx (1/sqrt(m)) d/dx + V,
// assembled by composing first-order factors.  Deliberately left
// unsymmetrized (band 2); its spectrum is reached through the q-grid form
// or the quarter-power similarity map, never by symmetric eigensolving.
inline GridOperator hamiltonian_H2_on_x(const MassProfile& p, const Grid& g,
                                        const OscillatorConfig& cfg,
                                        const std::function<double(double)>& V) {
    validate(cfg);
    op_detail::require_profile_covers(p, g);
    const GridOperator S = GridOperator::diagonal(
        g, [&p](double x) { return 1.0 / std::sqrt(p.m(x)); });
    const GridOperator C = central_difference(g);
    GridOperator out = scale(compose(S, compose(C, compose(S, C))), -0.5);
    for (int i = 0; i < g.n; ++i) out.at(i, 0) += V(g.point(i));
    return out;
}

// ---- ladder pair on the mass-ordered route -------------------------------------

// raise:  -(1/sqrt(2w)) m^a d/dx m^b + sqrt(w/2) q(x)
// lower:  +(1/sqrt(2w)) m^b d/dx m^a + sqrt(w/2) q(x)
// With the closure-forced a = b = -1/4 these close the oscillator algebra;
// other orderings from cfg exhibit the closure defect.
inline GridOperator ladder_A(const MassProfile& p, const Grid& g,
                             const CoordinateMap& map,
                             const OscillatorConfig& cfg, bool dagger) {
    validate(cfg);
    op_detail::require_profile_covers(p, g);
    const double outer = dagger ? cfg.ordering.a : cfg.ordering.b;
    const double inner = dagger ? cfg.ordering.b : cfg.ordering.a;
    const GridOperator L = GridOperator::diagonal(
        g, [&p, outer](double x) { return std::pow(p.m(x), outer); });
    const GridOperator R = GridOperator::diagonal(
        g, [&p, inner](double x) { return std::pow(p.m(x), inner); });
    const double dsign = dagger ? -1.0 : 1.0;
    GridOperator out = scale(compose(L, compose(central_difference(g), R)),
                             dsign / std::sqrt(2.0 * cfg.omega));
    const double qc = std::sqrt(0.5 * cfg.omega);
    for (int i = 0; i < g.n; ++i)
        out.at(i, 0) += qc * map.forward(g.point(i));
    return out;
}

// ---- ladder pair on the point-transformed route ---------------------------------

// raise:  -(1/sqrt(2w m)) d/dx + sqrt(w/2) q(x)
// lower:  +(1/sqrt(2w m)) d/dx + sqrt(w/2) q(x)
inline GridOperator ladder_B(const MassProfile& p, const Grid& g,
                             const CoordinateMap& map,
                             const OscillatorConfig& cfg, bool dagger) {
    validate(cfg);
    op_detail::require_profile_covers(p, g);
    const GridOperator S = GridOperator::diagonal(g, [&p, &cfg](double x) {
        return 1.0 / std::sqrt(2.0 * cfg.omega * p.m(x));
    });
    const double dsign = dagger ? -1.0 : 1.0;
    GridOperator out = scale(compose(S, central_difference(g)), dsign);
    const double qc = std::sqrt(0.5 * cfg.omega);
    for (int i = 0; i < g.n; ++i)
        out.at(i, 0) += qc * map.forward(g.point(i));
    return out;
}

// Conserved-current momentum (1/sqrt(2m)) d/dx.
inline GridOperator noether_momentum(const MassProfile& p, const Grid& g) {
    op_detail::require_profile_covers(p, g);
    const GridOperator S = GridOperator::diagonal(
        g, [&p](double x) { return 1.0 / std::sqrt(2.0 * p.m(x)); });
    return compose(S, central_difference(g));
}

} // namespace pdm
