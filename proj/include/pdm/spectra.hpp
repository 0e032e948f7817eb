#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "pdm/coord.hpp"
#include "pdm/errors.hpp"
#include "pdm/grid.hpp"
#include "pdm/operators.hpp"
#include "pdm/profiles.hpp"

namespace pdm {

// ---- analytic oscillator states -------------------------------------------------

inline double analytic_energy(int n, double omega) {
    if (n < 0) throw ConfigError("analytic_energy: level must be >= 0");
    if (!(omega > 0.0)) throw ConfigError("analytic_energy: omega must be > 0");
    return omega * (n + 0.5);
}

// Physicists' Hermite polynomial by the three-term recurrence.
inline double hermite(int n, double y) {
    if (n < 0) throw ConfigError("hermite: order must be >= 0");
    if (n == 0) return 1.0;
    double hm = 1.0;
    double hc = 2.0 * y;
    for (int k = 1; k < n; ++k) {
        const double hn = 2.0 * y * hc - 2.0 * k * hm;
        hm = hc;
        hc = hn;
    }
    return hc;
}

// Unit-norm Hermite function psi_n(y) = pi^{-1/4} (2^n n!)^{-1/2} H_n(y)
// e^{-y^2/2} through the normalized recurrence, which stays bounded where
// the raw polynomial would overflow.
inline double hermite_function(int n, double y) {
    if (n < 0) throw ConfigError("hermite_function: order must be >= 0");
    const double psi0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * y * y);
    if (n == 0) return psi0;
    double pm = psi0;
    double pc = std::sqrt(2.0) * y * psi0;
    for (int k = 1; k < n; ++k) {
        const double pn = std::sqrt(2.0 / (k + 1.0)) * y * pc -
                          std::sqrt(k / (k + 1.0)) * pm;
        pm = pc;
        pc = pn;
    }
    return pc;
}

// Unit-norm constant-mass eigenfunction in the target coordinate,
// Psi_n(q) = (w/pi)^{1/4} (2^n n!)^{-1/2} H_n(sqrt(w) q) e^{-w q^2 / 2}.
inline double analytic_Psi(int n, double omega, double q) {
    if (!(omega > 0.0)) throw ConfigError("analytic_Psi: omega must be > 0");
    return std::pow(omega, 0.25) * hermite_function(n, std::sqrt(omega) * q);
}

// Pulled-back position-space eigenfunction phi_n(x) = m(x)^{1/4} Psi_n(q(x)).
inline double analytic_phi(int n, double omega, const MassProfile& p,
                           const CoordinateMap& map, double x) {
    return std::pow(p.m(x), 0.25) * analytic_Psi(n, omega, map.forward(x));
}

// Level-n oscillator state: quantum number, frequency, and the closed-form
// normalization (w/pi)^{1/4} (2^n n!)^{-1/2} fixed by unit norm with
// positive sign.
class AnalyticState {
public:
    AnalyticState(int n, double omega) : n_(n), omega_(omega) {
        if (n < 0) throw ConfigError("analytic state: level must be >= 0");
        if (!(omega > 0.0))
            throw ConfigError("analytic state: omega must be > 0");
        norm_ = std::exp(0.25 * std::log(omega / std::numbers::pi) -
                         0.5 * (n * std::log(2.0) + std::lgamma(n + 1.0)));
    }

    int n() const { return n_; }
    double omega() const { return omega_; }
    double normalization() const { return norm_; }
    double energy() const { return analytic_energy(n_, omega_); }

    double Psi(double q) const { return analytic_Psi(n_, omega_, q); }
    double phi(const MassProfile& p, const CoordinateMap& map, double x) const {
        return analytic_phi(n_, omega_, p, map, x);
    }

private:
    int n_;
    double omega_;
    double norm_;
};

// ---- symmetric tridiagonal eigensolver -------------------------------------------

// Lowest-k eigenpairs of a grid Hamiltonian.  Eigenvalues ascend;
// eigenvectors are normalized against the grid measure (sum v_i^2 h = 1)
// with the first appreciable component made positive.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
    Grid grid;
};

namespace eig_detail {

// Number of eigenvalues of the tridiagonal (d, e) strictly below x, by the
// Sturm / LDL' sign count.
inline int count_below(const std::vector<double>& d,
                       const std::vector<double>& e, double x) {
    const int n = static_cast<int>(d.size());
    int cnt = 0;
    double q = 1.0;
    for (int i = 0; i < n; ++i) {
        const double off = i > 0 ? e[static_cast<std::size_t>(i) - 1] : 0.0;
        q = (d[static_cast<std::size_t>(i)] - x) - (i > 0 ? off * off / q : 0.0);
        if (q == 0.0) q = std::numeric_limits<double>::min();
        if (q < 0.0) ++cnt;
    }
    return cnt;
}

// LU factorization of (tridiagonal - lam I) with partial pivoting, then one
// solve; the factor layout matches the classic banded scheme with a second
// superdiagonal for row swaps.
struct TriLU {
    std::vector<double> dl, dd, du, du2;
    std::vector<int> swapped;

    TriLU(const std::vector<double>& d, const std::vector<double>& e,
          double lam) {
        const int n = static_cast<int>(d.size());
        dl.assign(static_cast<std::size_t>(n), 0.0);
        dd.resize(static_cast<std::size_t>(n));
        du.assign(static_cast<std::size_t>(n), 0.0);
        du2.assign(static_cast<std::size_t>(n), 0.0);
        swapped.assign(static_cast<std::size_t>(n), 0);
        double scale = 1.0;
        for (int i = 0; i < n; ++i) {
            dd[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)] - lam;
            scale = std::max(scale, std::fabs(dd[static_cast<std::size_t>(i)]));
            if (i < n - 1) {
                du[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
                dl[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
                scale = std::max(scale, std::fabs(e[static_cast<std::size_t>(i)]));
            }
        }
        // Exactly-zero pivots get a tiny same-scale stand-in; the huge but
        // finite solve that results is exactly what inverse iteration wants.
        const double tiny =
            scale * std::numeric_limits<double>::epsilon() * 1e-32;
        for (int i = 0; i < n - 1; ++i) {
            const auto si = static_cast<std::size_t>(i);
            if (std::fabs(dd[si]) >= std::fabs(dl[si])) {
                if (dd[si] == 0.0) dd[si] = tiny;
                const double fact = dl[si] / dd[si];
                dl[si] = fact;
                dd[si + 1] -= fact * du[si];
            } else {
                swapped[si] = 1;
                const double fact = dd[si] / dl[si];
                dd[si] = dl[si];
                dl[si] = fact;
                const double old_du = du[si];
                const double old_dd1 = dd[si + 1];
                du[si] = old_dd1;
                dd[si + 1] = old_du - fact * old_dd1;
                if (i < n - 2) {
                    du2[si] = du[si + 1];
                    du[si + 1] = -fact * du[si + 1];
                }
            }
        }
        if (dd[static_cast<std::size_t>(n) - 1] == 0.0)
            dd[static_cast<std::size_t>(n) - 1] = tiny;
    }

    void solve(std::vector<double>& b) const {
        const int n = static_cast<int>(b.size());
        for (int i = 0; i < n - 1; ++i) {
            const auto si = static_cast<std::size_t>(i);
            if (!swapped[si]) {
                b[si + 1] -= dl[si] * b[si];
            } else {
                const double tmp = b[si];
                b[si] = b[si + 1];
                b[si + 1] = tmp - dl[si] * b[si];
            }
        }
        b[static_cast<std::size_t>(n) - 1] /= dd[static_cast<std::size_t>(n) - 1];
        if (n > 1) {
            const auto sn = static_cast<std::size_t>(n);
            b[sn - 2] = (b[sn - 2] - du[sn - 2] * b[sn - 1]) / dd[sn - 2];
            for (int i = n - 3; i >= 0; --i) {
                const auto si = static_cast<std::size_t>(i);
                b[si] = (b[si] - du[si] * b[si + 1] - du2[si] * b[si + 2]) /
                        dd[si];
            }
        }
    }
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline void normalize2(std::vector<double>& v) {
    const double nrm = std::sqrt(dot(v, v));
    if (nrm > 0.0)
        for (double& x : v) x /= nrm;
}

} // namespace eig_detail

inline Spectrum eigen_symmetric_tridiagonal(const GridOperator& H, int k) {
    const Grid& g = H.grid();
    const int n = g.n;
    if (H.band() > 1)
        throw ConfigError("eigensolver: operator must be tridiagonal");
    if (!H.is_numerically_symmetric(1e-12))
        throw ConfigError("eigensolver: operator must be symmetric");
    if (k < 1 || k > n) {
        std::ostringstream os;
        os << "eigensolver: requested " << k << " eigenpairs of an n = " << n
           << " operator";
        throw ConfigError(os.str());
    }

    std::vector<double> d(static_cast<std::size_t>(n));
    std::vector<double> e(n > 1 ? static_cast<std::size_t>(n) - 1 : 0);
    for (int i = 0; i < n; ++i) {
        d[static_cast<std::size_t>(i)] = H.entry(i, i);
        if (i < n - 1)
            e[static_cast<std::size_t>(i)] =
                0.5 * (H.entry(i, i + 1) + H.entry(i + 1, i));
    }

    // Gershgorin enclosure of the whole spectrum.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < n; ++i) {
        const double r =
            (i > 0 ? std::fabs(e[static_cast<std::size_t>(i) - 1]) : 0.0) +
            (i < n - 1 ? std::fabs(e[static_cast<std::size_t>(i)]) : 0.0);
        lo = std::min(lo, d[static_cast<std::size_t>(i)] - r);
        hi = std::max(hi, d[static_cast<std::size_t>(i)] + r);
    }
    const double span = hi - lo;
    lo -= 1e-12 * span + 1e-12;
    hi += 1e-12 * span + 1e-12;

    Spectrum out{{}, {}, g};
    const double h = g.h();

    for (int j = 0; j < k; ++j) {
        // Bisection on the Sturm count pins the (j+1)-th smallest eigenvalue.
        double a = lo, b = hi;
        while (b - a > 4.0 * std::numeric_limits<double>::epsilon() *
                               std::max(std::fabs(a), std::fabs(b)) +
                           1e-300) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (eig_detail::count_below(d, e, mid) >= j + 1) b = mid;
            else a = mid;
        }
        double lam = 0.5 * (a + b);

        // Inverse iteration with a fixed, reproducible start vector.
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            v[static_cast<std::size_t>(i)] =
                1.0 + 0.5 * std::sin(2.7 * (i + 1));
        eig_detail::normalize2(v);
        const eig_detail::TriLU lu(d, e, lam);
        const double scale = 1.0 + std::fabs(lam) + span;
        double res = std::numeric_limits<double>::infinity();
        double best = res;
        for (int it = 0; it < 8; ++it) {
            lu.solve(v);
            // Deflate previously found directions; protects clustered pairs.
            for (const auto& u : out.eigenvectors) {
                double proj = 0.0;
                for (int i = 0; i < n; ++i)
                    proj += v[static_cast<std::size_t>(i)] *
                            u[static_cast<std::size_t>(i)] * h;
                for (int i = 0; i < n; ++i)
                    v[static_cast<std::size_t>(i)] -=
                        proj * u[static_cast<std::size_t>(i)];
            }
            eig_detail::normalize2(v);
            res = 0.0;
            for (int i = 0; i < n; ++i) {
                double s = d[static_cast<std::size_t>(i)] *
                           v[static_cast<std::size_t>(i)];
                if (i > 0)
                    s += e[static_cast<std::size_t>(i) - 1] *
                         v[static_cast<std::size_t>(i) - 1];
                if (i < n - 1)
                    s += e[static_cast<std::size_t>(i)] *
                         v[static_cast<std::size_t>(i) + 1];
                res = std::max(res,
                               std::fabs(s - lam * v[static_cast<std::size_t>(i)]));
            }
            if (res <= 256.0 * std::numeric_limits<double>::epsilon() * scale)
                break;
            if (it >= 2 && res >= 0.5 * best) break; // at its roundoff floor
            best = std::min(best, res);
        }
        if (!(res <= 1e-8 * scale)) {
            std::ostringstream os;
            os << "eigensolver: inverse iteration stalled at eigenpair " << j
               << " (residual " << res << ")";
            throw NumericError(os.str());
        }

        // Rayleigh polish, grid-measure normalization, sign convention.
        double num = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = d[static_cast<std::size_t>(i)] *
                       v[static_cast<std::size_t>(i)];
            if (i > 0)
                s += e[static_cast<std::size_t>(i) - 1] *
                     v[static_cast<std::size_t>(i) - 1];
            if (i < n - 1)
                s += e[static_cast<std::size_t>(i)] *
                     v[static_cast<std::size_t>(i) + 1];
            num += v[static_cast<std::size_t>(i)] * s;
        }
        lam = num / eig_detail::dot(v, v);

        double wnorm = 0.0;
        for (double x : v) wnorm += x * x * h;
        wnorm = std::sqrt(wnorm);
        double peak = 0.0;
        for (double x : v) peak = std::max(peak, std::fabs(x));
        double sign = 1.0;
        for (double x : v) {
            if (std::fabs(x) > 1e-12 * peak) {
                sign = x > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (double& x : v) x *= sign / wnorm;

        out.eigenvalues.push_back(lam);
        out.eigenvectors.push_back(std::move(v));
    }
    return out;
}

// ---- ladder matrix elements -------------------------------------------------------

enum class LadderDirection { Raise, Lower };
enum class LadderKind { A, B };

// Quadrature overlap <target | Op | source> between analytic neighbor levels,
// normalized by the state norms under the route's measure: the mass-ordered
// route pairs pulled-back states with the plain dx measure, the
// point-transformed route pairs target-coordinate states with dq = sqrt(m) dx.
// Lowering the ground state returns the residual norm of the annihilated
// state instead (its target does not exist).
inline double ladder_matrix_element(int n, LadderDirection dir,
                                    const MassProfile& p,
                                    const CoordinateMap& map,
                                    const OscillatorConfig& cfg,
                                    LadderKind kind) {
    if (n < 0) throw ConfigError("ladder_matrix_element: level must be >= 0");
    validate(cfg);
    const Grid g = cfg.grid();
    const bool raise = dir == LadderDirection::Raise;
    const int target = raise ? n + 1 : n - 1;

    std::vector<double> weight(static_cast<std::size_t>(g.n));
    std::vector<double> src(static_cast<std::size_t>(g.n));
    std::vector<double> tgt(static_cast<std::size_t>(g.n), 0.0);
    const double h = g.h();
    for (int i = 0; i < g.n; ++i) {
        const double x = g.point(i);
        const auto si = static_cast<std::size_t>(i);
        if (kind == LadderKind::A) {
            weight[si] = h;
            src[si] = analytic_phi(n, cfg.omega, p, map, x);
            if (target >= 0)
                tgt[si] = analytic_phi(target, cfg.omega, p, map, x);
        } else {
            weight[si] = std::sqrt(p.m(x)) * h;
            src[si] = analytic_Psi(n, cfg.omega, map.forward(x));
            if (target >= 0)
                tgt[si] = analytic_Psi(target, cfg.omega, map.forward(x));
        }
    }

    const GridOperator Op = kind == LadderKind::A
                                ? ladder_A(p, g, map, cfg, raise)
                                : ladder_B(p, g, map, cfg, raise);
    const std::vector<double> img = Op.apply(src);

    auto wdot = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i] * weight[i];
        return s;
    };

    if (target < 0) return std::sqrt(std::max(0.0, wdot(img, img)));
    const double nrm =
        std::sqrt(std::max(1e-300, wdot(src, src) * wdot(tgt, tgt)));
    return wdot(tgt, img) / nrm;
}

} // namespace pdm
