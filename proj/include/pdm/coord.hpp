#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <vector>

#include "pdm/errors.hpp"
#include "pdm/interval.hpp"
#include "pdm/profiles.hpp"

// Coordinate map q(x) = q_ref + integral_{x_ref}^{x} sqrt(m(s)) ds, built by
// adaptive quadrature with a cached cumulative table, plus inversion and an
// estimate of the attainable q-range.  The map is the bridge between the
// position-dependent-mass Hamiltonian on x and the unit-mass oscillator on q.

namespace pdm {

namespace quad {

// Adaptive Simpson with Richardson correction.  tol is absolute per call.
inline double simpson_step(double a, double fa, double fm, double b,
                           double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_rec(const std::function<double(double)>& f, double a,
                           double fa, double b, double fb, double m, double fm,
                           double whole, double tol, int depth,
                           double abs_floor) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_step(a, fa, flm, m, fm);
    const double right = simpson_step(m, fm, frm, b, fb);
    const double delta = left + right - whole;
    // Accept on the requested tolerance, on the roundoff floor of the whole
    // call (abs_floor) or of the local sum, or when the interval has shrunk
    // to the resolution of the abscissa.  Past those floors the correction
    // is dominated by rounding noise and recursing only grows the tree.
    const double local_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                               (std::fabs(left) + std::fabs(right));
    const double accept =
        std::max({15.0 * tol, abs_floor, local_floor});
    const double wmin = 8.0 * std::numeric_limits<double>::epsilon() *
                        std::max({std::fabs(a), std::fabs(b), 1e-3});
    if (std::fabs(delta) <= accept || (b - a) <= wmin)
        return left + right + delta / 15.0;
    if (depth <= 0) {
        std::ostringstream os;
        os << "quadrature failed to converge on [" << a << ", " << b << "]";
        throw NumericError(os.str());
    }
    return adaptive_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1,
                        abs_floor) +
           adaptive_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1,
                        abs_floor);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = simpson_step(a, fa, fm, b, fb);
    const double mag = (b - a) / 6.0 *
                       (std::fabs(fa) + 4.0 * std::fabs(fm) + std::fabs(fb));
    const double abs_floor =
        64.0 * std::numeric_limits<double>::epsilon() * mag;
    return adaptive_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth,
                        abs_floor);
}

} // namespace quad

struct RangeInfo {
    double q_lo = 0.0;
    double q_hi = 0.0;
    bool unbounded_below = false;
    bool unbounded_above = false;

    bool onto_reals() const { return unbounded_below && unbounded_above; }

    std::string str() const {
        std::ostringstream os;
        os << "(";
        if (unbounded_below) os << "-inf"; else os << q_lo;
        os << ", ";
        if (unbounded_above) os << "+inf"; else os << q_hi;
        os << ")";
        return os.str();
    }
};

class CoordinateMap {
public:
    CoordinateMap() = default;

    CoordinateMap(MassProfile p, double x0, double q0)
        : profile_(std::make_shared<MassProfile>(std::move(p))),
          x0_(x0),
          q0_(q0) {
        require_inside(profile_->domain(), x0, "coordinate map anchor");
        build_cache();
        estimate_range();
    }

    const MassProfile& profile() const { return *profile_; }
    double anchor_x() const { return x0_; }
    double anchor_q() const { return q0_; }
    const Interval& domain() const { return profile_->domain(); }
    const RangeInfo& range() const { return range_; }

    double dq_dx(double x) const { return std::sqrt(profile_->m(x)); }

    double forward(double x) const {
        require_inside(profile_->domain(), x, "coordinate map");
        if (x >= wlo_ && x <= whi_) {
            // Nearest breakpoint below keeps the refining step short.
            int j = static_cast<int>((x - wlo_) / dx_);
            j = std::clamp(j, 0, kPanels);
            const double bp = wlo_ + j * dx_;
            return cum_[static_cast<size_t>(j)] + segment(bp, x);
        }
        if (x > whi_) return cum_.back() + segment(whi_, x);
        return cum_.front() + segment(x, wlo_) * -1.0;
    }

    std::vector<double> forward_many(const std::vector<double>& xs) const {
        std::vector<double> out;
        out.reserve(xs.size());
        for (double x : xs) out.push_back(forward(x));
        return out;
    }

    // Solve forward(x) = q by bracketed Newton.  Throws DomainError when q is
    // outside the attainable range.
    double invert(double q) const {
        if ((!range_.unbounded_below && q < range_.q_lo) ||
            (!range_.unbounded_above && q > range_.q_hi)) {
            std::ostringstream os;
            os << "q = " << q << " lies outside the attainable range "
               << range_.str();
            throw DomainError(os.str());
        }
        double a, b;
        bracket(q, a, b);
        double x = 0.5 * (a + b);
        double fx = forward(x) - q;
        for (int it = 0; it < 100; ++it) {
            if (std::fabs(fx) <= 1e-10) return x;
            const double step = fx / dq_dx(x);
            double xn = x - step;
            if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
            const double fn = forward(xn) - q;
            if (fn > 0.0) b = xn; else a = xn;
            x = xn;
            fx = fn;
            if (b - a <= 1e-15 * std::max(1.0, std::fabs(x))) break;
        }
        if (std::fabs(fx) <= 1e-8) return x;
        std::ostringstream os;
        os << "inversion failed to reach tolerance at q = " << q
           << " (residual " << fx << ")";
        throw NumericError(os.str());
    }

private:
    static constexpr int kPanels = 1024;
    static constexpr double kWindowClip = 64.0;
    static constexpr double kEdgeInset = 1e-6;
    static constexpr double kUnboundedMagnitude = 1e6;

    std::function<double(double)> integrand() const {
        auto prof = profile_;
        return [prof](double s) { return std::sqrt(prof->m(s)); };
    }

    double segment(double a, double b, double tol = 1e-12) const {
        if (a == b) return 0.0;
        return quad::integrate(integrand(), a, b, tol);
    }

    void build_cache() {
        const Interval dom = profile_->domain();
        wlo_ = dom.bounded_below() ? dom.lo + kEdgeInset
                                   : std::min(-kWindowClip, x0_ - 1.0);
        whi_ = dom.bounded_above() ? dom.hi - kEdgeInset
                                   : std::max(kWindowClip, x0_ + 1.0);
        if (!(whi_ > wlo_))
            throw ConfigError("domain too narrow for a coordinate map");
        dx_ = (whi_ - wlo_) / kPanels;
        cum_.assign(kPanels + 1, 0.0);
        // Accumulate outward from the anchor so values near it stay
        // accurate even when a far tail integrates to a huge number.
        int j0 = static_cast<int>(std::lround((x0_ - wlo_) / dx_));
        j0 = std::clamp(j0, 0, kPanels);
        const double bp0 = wlo_ + j0 * dx_;
        cum_[static_cast<size_t>(j0)] =
            q0_ + (bp0 >= x0_ ? segment(x0_, bp0) : -segment(bp0, x0_));
        for (int j = j0; j < kPanels; ++j) {
            const double a = wlo_ + j * dx_;
            cum_[static_cast<size_t>(j) + 1] =
                cum_[static_cast<size_t>(j)] + segment(a, a + dx_);
        }
        for (int j = j0; j > 0; --j) {
            const double b = wlo_ + j * dx_;
            cum_[static_cast<size_t>(j) - 1] =
                cum_[static_cast<size_t>(j)] - segment(b - dx_, b);
        }
    }

    void estimate_range() {
        const Interval dom = profile_->domain();
        // Upper end.
        if (dom.bounded_above()) {
            const double q = cum_.back();
            if (std::fabs(q) > kUnboundedMagnitude) {
                range_.unbounded_above = true;
            } else {
                range_.q_hi = q;
            }
        } else {
            march(+1.0);
        }
        // Lower end.
        if (dom.bounded_below()) {
            const double q = cum_.front();
            if (std::fabs(q) > kUnboundedMagnitude) {
                range_.unbounded_below = true;
            } else {
                range_.q_lo = q;
            }
        } else {
            march(-1.0);
        }
    }

    // Geometric marching from the cache window edge over octaves
    // [x, 2x], [2x, 4x], ...; increment ratios settle immediately to
    // 2^(1-p) for a tail decaying like |x|^-p, so a sustained ratio near
    // or above 1 means the integral keeps accumulating mass and the range
    // is reported unbounded on that side.
    void march(double direction) {
        double edge = direction > 0 ? whi_ : wlo_;
        double acc = direction > 0 ? cum_.back() : cum_.front();
        double prev_delta = -1.0;
        int high_ratio_streak = 0;
        double last_ratio = 0.0;
        for (int k = 0; k < 44; ++k) {
            const double next = 2.0 * edge;
            double delta;
            try {
                delta = direction > 0 ? segment(edge, next, 1e-9)
                                      : segment(next, edge, 1e-9);
            } catch (const NumericError&) {
                mark_unbounded(direction);
                return;
            } catch (const DomainError&) {
                // The density is no longer evaluable this far out (typically
                // exponential underflow); its support has effectively ended.
                break;
            }
            acc += direction * delta;
            if (std::fabs(acc) > kUnboundedMagnitude) {
                mark_unbounded(direction);
                return;
            }
            if (prev_delta > 0.0) {
                last_ratio = delta / prev_delta;
                high_ratio_streak = last_ratio >= 0.9 ? high_ratio_streak + 1 : 0;
                if (high_ratio_streak >= 3) {
                    mark_unbounded(direction);
                    return;
                }
            }
            prev_delta = delta;
            edge = next;
        }
        // Increments decayed geometrically; extrapolate the tail.
        double tail = 0.0;
        if (prev_delta > 0.0 && last_ratio > 0.0 && last_ratio < 0.9)
            tail = prev_delta * last_ratio / (1.0 - last_ratio);
        if (direction > 0) range_.q_hi = acc + tail;
        else range_.q_lo = acc - tail;
    }

    void mark_unbounded(double direction) {
        if (direction > 0) range_.unbounded_above = true;
        else range_.unbounded_below = true;
    }

    void bracket(double q, double& a, double& b) const {
        const auto lo_it = std::lower_bound(cum_.begin(), cum_.end(), q);
        if (lo_it == cum_.begin()) {
            // Below the cached window: march outward.
            b = wlo_;
            double step = 1.0;
            a = b - step;
            while (profile_->domain().contains(a) && forward(a) > q) {
                b = a;
                step *= 2.0;
                a = b - step;
            }
            if (!profile_->domain().contains(a))
                a = std::nextafter(profile_->domain().lo,
                                   std::numeric_limits<double>::infinity());
            return;
        }
        if (lo_it == cum_.end()) {
            a = whi_;
            double step = 1.0;
            b = a + step;
            while (profile_->domain().contains(b) && forward(b) < q) {
                a = b;
                step *= 2.0;
                b = a + step;
            }
            if (!profile_->domain().contains(b))
                b = std::nextafter(profile_->domain().hi,
                                   -std::numeric_limits<double>::infinity());
            return;
        }
        const auto j = std::distance(cum_.begin(), lo_it);
        b = wlo_ + static_cast<double>(j) * dx_;
        a = b - dx_;
    }

    std::shared_ptr<const MassProfile> profile_;
    double x0_ = 0.0;
    double q0_ = 0.0;
    double wlo_ = 0.0;
    double whi_ = 0.0;
    double dx_ = 0.0;
    std::vector<double> cum_;
    RangeInfo range_;
};

// Anchor convention: the profile's own anchor if it has one, else q = 0 at
// x = 0 when the domain contains it, else at the clipped domain midpoint.
inline CoordinateMap build_map(const MassProfile& p) {
    if (p.anchor()) return CoordinateMap(p, p.anchor()->x_ref, p.anchor()->q_ref);
    if (p.domain().contains(0.0)) return CoordinateMap(p, 0.0, 0.0);
    return CoordinateMap(p, p.domain().clipped_midpoint(), 0.0);
}

inline CoordinateMap build_map(const MassProfile& p, double x0, double q0) {
    return CoordinateMap(p, x0, q0);
}

// Oscillator potential V = (1/2) w^2 q(x)^2 through the quadrature map,
// with V' = w^2 q sqrt(m) for the classical force law.
inline Potential oscillator_potential(const CoordinateMap& map, double omega) {
    if (!(omega > 0.0))
        throw ConfigError("oscillator_potential: omega must be > 0");
    auto m = std::make_shared<CoordinateMap>(map);
    return {[m, omega](double x) {
                const double q = m->forward(x);
                const double qp = m->dq_dx(x);
                return Dual{0.5 * omega * omega * q * q,
                            omega * omega * q * qp};
            },
            map.domain(), "(omega^2/2)*q(x)^2"};
}

// Recover the deformation Q = (q/x)^2 from a mass profile and its map.
// Requires q(0) = 0 whenever the domain contains the origin; near the origin
// the ratio switches to a series built from the mass derivatives at 0.
inline DeformationProfile deformation_from_mass(const MassProfile& p,
                                                const CoordinateMap& map) {
    const Interval dom = p.domain();
    const bool has_origin = dom.contains(0.0);
    double q_at_0 = 0.0;
    if (has_origin) {
        q_at_0 = map.forward(0.0);
        if (std::fabs(q_at_0) > 1e-9) {
            std::ostringstream os;
            os << "deformation_from_mass: q(0) = " << q_at_0
               << " is nonzero, so (q/x)^2 diverges at the origin; rebuild "
                  "the map anchored at q(0) = 0";
            throw DomainError(os.str());
        }
    }

    auto mp = std::make_shared<MassProfile>(p);
    auto mm = std::make_shared<CoordinateMap>(map);
    const double rebase = q_at_0;
    auto fn = [mp, mm, has_origin, rebase](double x) {
        constexpr double kGuard = 1e-4;
        if (has_origin && std::fabs(x) < kGuard) {
            // q = a x + b' x^2 + c' x^3 around 0 with a = sqrt(m(0)),
            // b' = m'(0)/(4a), c' = q'''(0)/6; f = q/x.
            const Dual2 m0 = mp->d2m(0.0);
            const double a = std::sqrt(m0.v);
            const double bp = m0.d / (4.0 * a);
            const double q3 = m0.dd / (2.0 * a) - m0.d * m0.d / (4.0 * a * a * a);
            const double cp = q3 / 6.0;
            Dual2 f{a + bp * x + cp * x * x, bp + 2.0 * cp * x, 2.0 * cp};
            return f * f;
        }
        const double q = mm->forward(x) - rebase;
        const Dual md = mp->dm(x);
        const double qp = std::sqrt(md.v);
        const double qpp = md.d / (2.0 * qp);
        const double f = q / x;
        const double fp = (qp - f) / x;
        const double fpp = (qpp - 2.0 * fp) / x;
        Dual2 F{f, fp, fpp};
        if (!(F.v * F.v > 0.0)) {
            std::ostringstream os;
            os << "deformation_from_mass: q vanishes at x = " << x
               << " away from the origin; anchor the map so q is "
                  "sign-definite there";
            throw DomainError(os.str());
        }
        return F * F;
    };

    std::optional<std::string> formula;
    if (p.formula()) formula = "(q(x)/x)^2 with m = " + *p.formula();
    return DeformationProfile(p.name(), fn, dom, p.params(), p.anchor(),
                              formula);
}

} // namespace pdm
