#pragma once

#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pdm/dual.hpp"
#include "pdm/errors.hpp"
#include "pdm/expr.hpp"
#include "pdm/interval.hpp"

// Mass and deformation profiles.  A MassProfile is a positive function m(x)
// on an open interval; a DeformationProfile is a positive factor Q(x) that
// deforms the oscillator potential to (1/2)w^2 Q(x) x^2.  The two are tied
// by m = Q (1 + x Q'/(2Q))^2, equivalently m = q'^2 for q = x sqrt(Q).
// Eight named profiles ship with closed forms; arbitrary expressions are
// accepted through the same types.

namespace pdm {

// Pins the additive constant of q(x) = integral sqrt(m): q(x_ref) = q_ref.
// Carried by profiles whose closed form dictates a particular primitive.
struct Anchor {
    double x_ref = 0.0;
    double q_ref = 0.0;
};

namespace profile_detail {

constexpr double kValidationClip = 64.0;
constexpr int kValidationSamples = 512;

inline Interval clip_for_validation(const Interval& dom,
                                    double clip = kValidationClip) {
    Interval w;
    w.lo = dom.bounded_below() ? dom.lo : -clip;
    w.hi = dom.bounded_above() ? dom.hi : clip;
    if (!(w.hi > w.lo)) {
        // Domain lies entirely beyond the clip window; keep a unit-wide
        // window hugging the finite end instead.
        if (dom.bounded_below()) {
            w.lo = dom.lo;
            w.hi = dom.bounded_above() ? dom.hi : dom.lo + 2.0 * clip;
        } else {
            w.hi = dom.hi;
            w.lo = dom.hi - 2.0 * clip;
        }
    }
    return w;
}

inline void validate_positive(const std::function<Dual2(double)>& fn,
                              const Interval& window, const char* what) {
    const double span = window.hi - window.lo;
    for (int k = 0; k < kValidationSamples; ++k) {
        const double x = window.lo + (k + 0.5) * span / kValidationSamples;
        double v;
        try {
            v = fn(x).v;
        } catch (const DomainError&) {
            throw;
        }
        if (!(v > 0.0) || !std::isfinite(v)) {
            std::ostringstream os;
            os << what << " is not positive at x = " << x << " (value " << v
               << ")";
            throw DomainError(os.str());
        }
    }
}

} // namespace profile_detail

// ---- MassProfile -----------------------------------------------------------

class MassProfile {
public:
    MassProfile() = default;

    // fn must yield (m, m', m'') as a Dual2.  exact_dd marks whether the
    // second derivative is exact (expressions) or a finite-difference
    // estimate (masses derived from a deformation bracket).
    MassProfile(std::string name, std::function<Dual2(double)> fn,
                Interval domain, std::map<std::string, double> params = {},
                std::optional<Anchor> anchor = std::nullopt,
                std::optional<std::string> formula = std::nullopt,
                bool exact_dd = true,
                std::optional<Interval> validation_window = std::nullopt)
        : name_(std::move(name)),
          fn_(std::move(fn)),
          domain_(domain),
          params_(std::move(params)),
          anchor_(anchor),
          formula_(std::move(formula)),
          exact_dd_(exact_dd) {
        const Interval w = validation_window
                               ? *validation_window
                               : profile_detail::clip_for_validation(domain_);
        profile_detail::validate_positive(fn_, w, "mass");
        validation_window_ = w;
    }

    static MassProfile from_expression(std::string name, const Expr& e,
                                       std::map<std::string, double> params,
                                       Interval domain,
                                       std::optional<Anchor> anchor = {},
                                       std::optional<Interval> window = {}) {
        auto bound = params;
        std::string formula = e.serialize();
        auto fn = [e, bound](double x) { return e.eval(var2(x), bound); };
        MassProfile p(std::move(name), fn, domain, std::move(params), anchor,
                      formula, true, window);
        p.set_value_channel([e, bound](double x) { return e.eval(x, bound); });
        return p;
    }

    // Optional cheap evaluator for m(x) alone, bypassing derivative work in
    // quadrature-heavy paths.
    void set_value_channel(std::function<double(double)> vfn) {
        vfn_ = std::move(vfn);
    }

    const std::string& name() const { return name_; }
    const Interval& domain() const { return domain_; }
    const std::map<std::string, double>& params() const { return params_; }
    const std::optional<Anchor>& anchor() const { return anchor_; }
    const std::optional<std::string>& formula() const { return formula_; }
    bool exact_second_derivative() const { return exact_dd_; }
    const Interval& validation_window() const { return validation_window_; }

    // Zero is tolerated at evaluation time (far-tail underflow of decaying
    // masses); construction-time validation enforces strict positivity on
    // the sampled window.
    double m(double x) const {
        if (!vfn_) return value(x).v;
        require_inside(domain_, x, "mass profile");
        const double v = vfn_(x);
        check_value(v, x);
        return v;
    }

    Dual dm(double x) const {
        Dual2 v = value(x);
        return {v.v, v.d};
    }

    Dual2 d2m(double x) const { return value(x); }

private:
    Dual2 value(double x) const {
        require_inside(domain_, x, "mass profile");
        Dual2 v = fn_(x);
        check_value(v.v, x);
        return v;
    }

    void check_value(double v, double x) const {
        if (v >= 0.0 && std::isfinite(v)) return;
        std::ostringstream os;
        os << "mass profile '" << name_ << "' is not a finite nonnegative value at x = "
           << x << " (value " << v << ")";
        throw DomainError(os.str());
    }

    std::string name_;
    std::function<Dual2(double)> fn_;
    std::function<double(double)> vfn_;
    Interval domain_;
    std::map<std::string, double> params_;
    std::optional<Anchor> anchor_;
    std::optional<std::string> formula_;
    bool exact_dd_ = true;
    Interval validation_window_;
};

// ---- DeformationProfile ----------------------------------------------------

class DeformationProfile {
public:
    DeformationProfile() = default;

    DeformationProfile(std::string name, std::function<Dual2(double)> Qfn,
                       Interval domain,
                       std::map<std::string, double> params = {},
                       std::optional<Anchor> anchor = std::nullopt,
                       std::optional<std::string> formula = std::nullopt,
                       std::optional<Interval> validation_window = std::nullopt)
        : name_(std::move(name)),
          Qfn_(std::move(Qfn)),
          domain_(domain),
          params_(std::move(params)),
          anchor_(anchor),
          formula_(std::move(formula)) {
        const Interval w = validation_window
                               ? *validation_window
                               : profile_detail::clip_for_validation(domain_);
        profile_detail::validate_positive(Qfn_, w, "deformation Q");
        validation_window_ = w;
    }

    const std::string& name() const { return name_; }
    const Interval& domain() const { return domain_; }
    const std::map<std::string, double>& params() const { return params_; }
    const std::optional<Anchor>& anchor() const { return anchor_; }
    const std::optional<std::string>& formula() const { return formula_; }
    const Interval& validation_window() const { return validation_window_; }

    double Q(double x) const { return value(x).v; }
    Dual dQ(double x) const {
        Dual2 v = value(x);
        return {v.v, v.d};
    }
    Dual2 d2Q(double x) const { return value(x); }

    // Stable evaluator for q(x)^2 = x^2 Q(x), defined on a (possibly larger)
    // domain where the product form has no singularity.  Present on built-ins.
    struct SquaredMap {
        std::function<Dual(double)> fn;
        Interval domain;
        std::string formula;
    };

    const std::optional<SquaredMap>& squared_map() const { return qsq_; }
    void set_squared_map(SquaredMap s) { qsq_ = std::move(s); }

private:
    Dual2 value(double x) const {
        require_inside(domain_, x, "deformation profile");
        Dual2 v = Qfn_(x);
        if (!(v.v >= 0.0) || !std::isfinite(v.v)) {
            std::ostringstream os;
            os << "deformation '" << name_
               << "' is not a finite nonnegative value at x = " << x
               << " (value " << v.v << ")";
            throw DomainError(os.str());
        }
        return v;
    }

    std::string name_;
    std::function<Dual2(double)> Qfn_;
    Interval domain_;
    std::map<std::string, double> params_;
    std::optional<Anchor> anchor_;
    std::optional<std::string> formula_;
    std::optional<SquaredMap> qsq_;
    Interval validation_window_;
};

// ---- closed forms ----------------------------------------------------------

struct ClosedMap {
    std::function<double(double)> fn;
    Interval domain;
    std::string formula;
};

// V(x; w), the oscillator potential in closed form, (1/2) w^2 q(x)^2.
struct ClosedPotential {
    std::function<double(double, double)> fn; // (x, omega) -> V
    Interval domain;
    std::string formula; // with `omega` symbolic
};

struct ClosedForms {
    std::optional<ClosedMap> q;
    std::optional<ClosedPotential> V;
};

// Evaluable potential with first derivative, for Hamiltonians and the
// classical force law.
struct Potential {
    std::function<Dual(double)> fn;
    Interval domain;
    std::string formula;

    double operator()(double x) const { return fn(x).v; }
    Dual dual(double x) const { return fn(x); }
};

inline Potential zero_potential() {
    return {[](double) { return Dual{0.0, 0.0}; }, whole_line(), "0"};
}

// ---- deformed potential V = (1/2) w^2 Q(x) x^2 ------------------------------

inline Potential deformed_potential(const DeformationProfile& d, double omega) {
    if (!(omega > 0.0)) throw ConfigError("deformed_potential: omega must be > 0");
    const double w2h = 0.5 * omega * omega;
    if (d.squared_map()) {
        auto qsq = *d.squared_map();
        std::string formula =
            "(omega^2/2)*(" + qsq.formula + ")";
        return {[qsq, w2h](double x) {
                    require_inside(qsq.domain, x, "deformed potential");
                    Dual s = qsq.fn(x);
                    return Dual{w2h * s.v, w2h * s.d};
                },
                qsq.domain, formula};
    }
    DeformationProfile dp = d;
    std::string formula = "(omega^2/2)*x^2*Q(x)";
    return {[dp, w2h](double x) {
                Dual Q = dp.dQ(x);
                Dual X{x, 1.0};
                Dual v = X * X * Q;
                return Dual{w2h * v.v, w2h * v.d};
            },
            d.domain(), formula};
}

// ---- mass from deformation (m = Q (1 + x Q'/(2Q))^2) ------------------------

namespace profile_detail {

// Exact (m, m') from Q duals; m'' would need Q''' so the caller finite-
// differences it.
inline Dual mass_bracket_dual(const DeformationProfile& d, double x) {
    Dual2 Q2 = d.d2Q(x);
    Dual Q{Q2.v, Q2.d};
    Dual Qp{Q2.d, Q2.dd};
    Dual X{x, 1.0};
    Dual B = 1.0 + X * Qp / (2.0 * Q);
    return Q * B * B;
}

inline double bracket_value(const DeformationProfile& d, double x) {
    Dual2 Q2 = d.d2Q(x);
    return 1.0 + x * Q2.d / (2.0 * Q2.v);
}

} // namespace profile_detail

inline MassProfile mass_from_deformation(const DeformationProfile& d) {
    // Trim the domain to the bracket-sign-definite piece around the
    // reference point, so m = Q B^2 stays strictly positive.
    const Interval w = d.validation_window();
    double ref;
    if (d.anchor() && d.domain().contains(d.anchor()->x_ref))
        ref = d.anchor()->x_ref;
    else if (d.domain().contains(0.0))
        ref = 0.0;
    else
        ref = 0.5 * (w.lo + w.hi);

    Interval trimmed = d.domain();
    const int ns = profile_detail::kValidationSamples;
    const double span = w.hi - w.lo;
    double prev_x = w.lo + 0.5 * span / ns;
    double prev_b = profile_detail::bracket_value(d, prev_x);
    for (int k = 1; k < ns; ++k) {
        const double x = w.lo + (k + 0.5) * span / ns;
        const double b = profile_detail::bracket_value(d, x);
        if ((prev_b < 0.0) != (b < 0.0)) {
            // Bisect the bracket zero and trim the side not containing ref.
            double a = prev_x, c = x;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (a + c);
                const double bm = profile_detail::bracket_value(d, mid);
                if ((bm < 0.0) == (prev_b < 0.0)) a = mid; else c = mid;
            }
            const double z = 0.5 * (a + c);
            if (z < ref) trimmed.lo = std::max(trimmed.lo, z);
            else trimmed.hi = std::min(trimmed.hi, z);
        }
        prev_x = x;
        prev_b = b;
    }
    if (!trimmed.contains(ref))
        throw DomainError("mass_from_deformation: no bracket-sign-definite "
                          "subinterval around the reference point");

    DeformationProfile dp = d;
    Interval dom = trimmed;
    auto fn = [dp, dom](double x) {
        Dual m = profile_detail::mass_bracket_dual(dp, x);
        // Second derivative by central difference of the exact first
        // derivative; only consumed by Taylor fallbacks near x = 0.
        double h = 1e-5 * std::max(1.0, std::fabs(x));
        double lo = x - h, hi = x + h;
        if (!dom.contains(lo)) lo = x;
        if (!dom.contains(hi)) hi = x;
        double dd = 0.0;
        if (hi > lo) {
            const double dhi = profile_detail::mass_bracket_dual(dp, hi).d;
            const double dlo = profile_detail::mass_bracket_dual(dp, lo).d;
            dd = (dhi - dlo) / (hi - lo);
        }
        return Dual2{m.v, m.d, dd};
    };

    std::optional<std::string> formula;
    if (d.formula())
        formula = "Q*(1+x*Q'/(2*Q))^2 with Q = " + *d.formula();
    Interval vw = d.validation_window();
    vw.lo = std::max(vw.lo, trimmed.lo);
    vw.hi = std::min(vw.hi, trimmed.hi);
    MassProfile out(d.name(), fn, trimmed, d.params(), d.anchor(), formula,
                    /*exact_dd=*/false, vw);
    DeformationProfile dv = d;
    out.set_value_channel([dv](double x) {
        Dual2 Q = dv.d2Q(x);
        const double B = 1.0 + x * Q.d / (2.0 * Q.v);
        return Q.v * B * B;
    });
    return out;
}

// ---- built-in registry -------------------------------------------------------

struct BuiltinTriple {
    MassProfile mass;
    DeformationProfile deformation;
    ClosedForms closed;
};

namespace profile_detail {

inline std::map<std::string, double> merge_params(
    const std::map<std::string, double>& defaults,
    const std::map<std::string, double>& user, const std::string& name) {
    std::map<std::string, double> out = defaults;
    for (const auto& [k, v] : user) {
        auto it = out.find(k);
        if (it == out.end())
            throw ConfigError("profile '" + name + "' has no parameter '" + k +
                              "'");
        it->second = v;
    }
    return out;
}

inline void require_positive_param(const std::string& profile,
                                   const std::string& key, double v) {
    if (!(v > 0.0)) {
        std::ostringstream os;
        os << "profile '" << profile << "': parameter " << key
           << " must be > 0, got " << v;
        throw ConfigError(os.str());
    }
}

// Dual2 evaluator for Q = (qc(x)/x)^2 given the closed q expression, with a
// power-series patch over |x| < guard for the removable singularity at the
// origin (offset must be zero there).  c2/c4 are the series coefficients of
// qc(x)/x = 1 + c2 x^2 + c4 x^4 + ...
inline std::function<Dual2(double)> ratio_squared_eval(
    Expr qc, std::map<std::string, double> params, double offset, double c2,
    double c4) {
    constexpr double kGuard = 1e-4;
    return [qc, params, offset, c2, c4](double x) {
        if (std::fabs(x) < kGuard) {
            if (offset != 0.0)
                throw DomainError(
                    "deformation Q diverges at the origin when offset != 0");
            const double x2 = x * x;
            Dual2 f{1.0 + c2 * x2 + c4 * x2 * x2,
                    2.0 * c2 * x + 4.0 * c4 * x2 * x,
                    2.0 * c2 + 12.0 * c4 * x2};
            return f * f;
        }
        Dual2 q = qc.eval(var2(x), params);
        const double f = q.v / x;
        const double fp = (q.d - f) / x;
        const double fpp = (q.dd - 2.0 * fp) / x;
        Dual2 F{f, fp, fpp};
        return F * F;
    };
}

inline std::function<Dual2(double)> expr_eval2(
    const Expr& e, const std::map<std::string, double>& params) {
    return [e, params](double x) { return e.eval(var2(x), params); };
}

inline std::function<Dual(double)> expr_eval1(
    const Expr& e, const std::map<std::string, double>& params) {
    return [e, params](double x) { return e.eval(var(x), params); };
}

inline ClosedMap closed_map_from_expr(const std::string& text,
                                      const std::map<std::string, double>& ps,
                                      Interval dom) {
    Expr e = Expr::parse(text);
    return {[e, ps](double x) { return e.eval(x, ps); }, dom,
            e.substitute(ps).serialize()};
}

inline ClosedPotential closed_potential_from_qsq(
    const std::string& qsq_text, const std::map<std::string, double>& ps,
    Interval dom) {
    Expr e = Expr::parse(qsq_text);
    return {[e, ps](double x, double omega) {
                return 0.5 * omega * omega * e.eval(x, ps);
            },
            dom, "(omega^2/2)*(" + e.substitute(ps).serialize() + ")"};
}

inline DeformationProfile::SquaredMap squared_map_from_expr(
    const std::string& text, const std::map<std::string, double>& ps,
    Interval dom) {
    Expr e = Expr::parse(text);
    return {[e, ps](double x) { return e.eval(var(x), ps); }, dom,
            e.substitute(ps).serialize()};
}

} // namespace profile_detail

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {
        "constant",  "rational_cubic", "singular_cubic", "power_law",
        "asinh_log", "log_ratio",      "morse",          "yukawa"};
    return names;
}

// Construct a named profile triple.  Unknown names and unknown or invalid
// parameters raise ConfigError; profile positivity failures raise DomainError.
inline BuiltinTriple builtin(const std::string& name,
                             const std::map<std::string, double>& user = {}) {
    using namespace profile_detail;
    const double inf = std::numeric_limits<double>::infinity();

    if (name == "constant") {
        auto ps = merge_params({}, user, name);
        Interval dom = whole_line();
        Expr me = Expr::parse("1");
        MassProfile mass = MassProfile::from_expression(
            name, me, ps, dom, Anchor{0.0, 0.0});
        Expr Qe = Expr::parse("1");
        DeformationProfile def(name, expr_eval2(Qe, ps), dom, ps,
                               Anchor{0.0, 0.0}, Qe.serialize());
        def.set_squared_map(squared_map_from_expr("x^2", ps, dom));
        ClosedForms cf;
        cf.q = closed_map_from_expr("x", ps, dom);
        cf.V = closed_potential_from_qsq("x^2", ps, dom);
        return {std::move(mass), std::move(def), std::move(cf)};
    }

    if (name == "rational_cubic") {
        auto ps = merge_params({{"lambda", 1.0}}, user, name);
        require_positive_param(name, "lambda", ps.at("lambda"));
        Interval dom = whole_line();
        Expr me = Expr::parse("1/(1+lambda*x^2)^3");
        MassProfile mass = MassProfile::from_expression(
            name, me, ps, dom, Anchor{0.0, 0.0});
        Expr Qe = Expr::parse("1/(1+lambda*x^2)");
        DeformationProfile def(name, expr_eval2(Qe, ps), dom, ps,
                               Anchor{0.0, 0.0},
                               Qe.substitute(ps).serialize());
        def.set_squared_map(
            squared_map_from_expr("x^2/(1+lambda*x^2)", ps, dom));
        ClosedForms cf;
        cf.q = closed_map_from_expr("x/sqrt(1+lambda*x^2)", ps, dom);
        cf.V = closed_potential_from_qsq("x^2/(1+lambda*x^2)", ps, dom);
        return {std::move(mass), std::move(def), std::move(cf)};
    }

    if (name == "singular_cubic") {
        auto ps = merge_params({{"lambda", 1.0}}, user, name);
        const double lam = ps.at("lambda");
        require_positive_param(name, "lambda", lam);
        Interval dom{1.0 / std::sqrt(lam), inf};
        // The printed closed form x/sqrt(lambda x^2 - 1) decreases; the
        // shipped primitive is its negative so that q' = +sqrt(m).
        ClosedMap q = closed_map_from_expr("-x/sqrt(lambda*x^2-1)", ps, dom);
        const double x_ref = dom.lo + 1.0;
        Anchor anc{x_ref, q.fn(x_ref)};
        Expr me = Expr::parse("1/(lambda*x^2-1)^3");
        MassProfile mass = MassProfile::from_expression(name, me, ps, dom, anc);
        Expr Qe = Expr::parse("1/(lambda*x^2-1)");
        DeformationProfile def(name, expr_eval2(Qe, ps), dom, ps, anc,
                               Qe.substitute(ps).serialize());
        def.set_squared_map(
            squared_map_from_expr("x^2/(lambda*x^2-1)", ps, dom));
        ClosedForms cf;
        cf.q = std::move(q);
        cf.V = closed_potential_from_qsq("x^2/(lambda*x^2-1)", ps, dom);
        return {std::move(mass), std::move(def), std::move(cf)};
    }

    if (name == "power_law") {
        auto ps =
            merge_params({{"lambda", 1.0}, {"sigma", 2.0}}, user, name);
        const double lam = ps.at("lambda");
        const double sig = ps.at("sigma");
        require_positive_param(name, "lambda", lam);
        if (sig == -2.0 || sig == 0.0)
            throw ConfigError(
                "profile 'power_law': sigma in {-2, 0} is degenerate (trivial "
                "or constant-mass)");
        if (!(sig > 0.0 && sig == std::floor(sig)))
            std::cerr << "note: power_law with sigma = " << sig
                      << " (not a positive integer); formulas remain valid on "
                         "x > 0\n";
        Interval dom{0.0, inf};
        const double sgn = (1.0 + 0.5 * sig) > 0.0 ? 1.0 : -1.0;
        const std::string qtext =
            (sgn > 0 ? "sqrt(lambda)*x^((sigma+2)/2)"
                     : "-sqrt(lambda)*x^((sigma+2)/2)");
        ClosedMap q = closed_map_from_expr(qtext, ps, dom);
        Anchor anc{1.0, q.fn(1.0)};
        Expr me = Expr::parse("(1+sigma/2)^2*lambda*x^sigma");
        MassProfile mass = MassProfile::from_expression(name, me, ps, dom, anc);
        Expr Qe = Expr::parse("lambda*x^sigma");
        DeformationProfile def(name, expr_eval2(Qe, ps), dom, ps, anc,
                               Qe.substitute(ps).serialize());
        def.set_squared_map(
            squared_map_from_expr("lambda*x^(sigma+2)", ps, dom));
        ClosedForms cf;
        cf.q = std::move(q);
        cf.V = closed_potential_from_qsq("lambda*x^(sigma+2)", ps, dom);
        return {std::move(mass), std::move(def), std::move(cf)};
    }

    if (name == "asinh_log") {
        auto ps =
            merge_params({{"alpha", 1.0}, {"offset", 0.0}}, user, name);
        const double a = ps.at("alpha");
        require_positive_param(name, "alpha", a);
        Interval dom = whole_line();
        Expr me = Expr::parse("1/(alpha^2*x^2+1)");
        MassProfile mass = MassProfile::from_expression(
            name, me, ps, dom, Anchor{0.0, ps.at("offset")});
        Expr qc = Expr::parse("asinh(alpha*x)/alpha+offset");
        // qc(x)/x = 1 - (a^2/6) x^2 + (3 a^4/40) x^4 - ...
        auto Qfn = ratio_squared_eval(qc, ps, ps.at("offset"),
                                      -a * a / 6.0, 3.0 * a * a * a * a / 40.0);
        DeformationProfile def(name, Qfn, dom, ps,
                               Anchor{0.0, ps.at("offset")},
                               "((asinh(alpha*x)/alpha+offset)/x)^2");
        def.set_squared_map(squared_map_from_expr(
            "(asinh(alpha*x)/alpha+offset)^2", ps, dom));
        ClosedForms cf;
        cf.q = closed_map_from_expr("asinh(alpha*x)/alpha+offset", ps, dom);
        cf.V = closed_potential_from_qsq("(asinh(alpha*x)/alpha+offset)^2",
                                         ps, dom);
        return {std::move(mass), std::move(def), std::move(cf)};
    }

    if (name == "log_ratio") {
        auto ps =
            merge_params({{"alpha", 1.0}, {"offset", 0.0}}, user, name);
        const double a = ps.at("alpha");
        require_positive_param(name, "alpha", a);
        Interval dom{-1.0 / a, 1.0 / a};
        Expr me = Expr::parse("1/(1-alpha^2*x^2)^2");
        MassProfile mass = MassProfile::from_expression(
            name, me, ps, dom, Anchor{0.0, ps.at("offset")});
        // The printed form ln((alpha x - 1)/(alpha x + 1)) has a negative
        // argument on the domain; the shipped primitive uses the equivalent
        // ln((1 + alpha x)/(1 - alpha x))/(2 alpha), which obeys q' = sqrt(m).
        Expr qc = Expr::parse("ln((1+alpha*x)/(1-alpha*x))/(2*alpha)+offset");
        // qc(x)/x = 1 + (a^2/3) x^2 + (a^4/5) x^4 + ...
        auto Qfn = ratio_squared_eval(qc, ps, ps.at("offset"), a * a / 3.0,
                                      a * a * a * a / 5.0);
        DeformationProfile def(
            name, Qfn, dom, ps, Anchor{0.0, ps.at("offset")},
            "((ln((1+alpha*x)/(1-alpha*x))/(2*alpha)+offset)/x)^2");
        def.set_squared_map(squared_map_from_expr(
            "(ln((1+alpha*x)/(1-alpha*x))/(2*alpha)+offset)^2", ps, dom));
        ClosedForms cf;
        cf.q = closed_map_from_expr(
            "ln((1+alpha*x)/(1-alpha*x))/(2*alpha)+offset", ps, dom);
        cf.V = closed_potential_from_qsq(
            "(ln((1+alpha*x)/(1-alpha*x))/(2*alpha)+offset)^2", ps, dom);
        return {std::move(mass), std::move(def), std::move(cf)};
    }

    if (name == "morse") {
        auto ps = merge_params({{"lambda", 1.0}, {"beta", 1.0}}, user, name);
        const double lam = ps.at("lambda");
        const double bet = ps.at("beta");
        require_positive_param(name, "lambda", lam);
        require_positive_param(name, "beta", bet);
        const double xm = std::log(2.0) / bet;
        // Mass side: the printed mass, positive on x > ln2/beta.  Its
        // primitive q(x) = sqrt(lambda)(2 ln(1+t) - ln 2 + beta x - t) with
        // t = sqrt(1 - 2 e^{-beta x}) vanishes at the left edge.
        Interval mdom{xm, inf};
        Expr me = Expr::parse(
            "lambda*beta^2*(exp(-beta*x)-1)^2/(1-2*exp(-beta*x))");
        Expr mq = Expr::parse(
            "sqrt(lambda)*(2*ln(1+sqrt(1-2*exp(-beta*x)))-ln(2)+beta*x"
            "-sqrt(1-2*exp(-beta*x)))");
        const double mx_ref = xm + 1.0;
        Anchor manc{mx_ref, mq.eval(mx_ref, ps)};
        MassProfile mass = MassProfile::from_expression(name, me, ps, mdom,
                                                        manc);
        // Deformation side: the printed Q lives on x < -ln2/beta where the
        // shape e^{-2 beta x} - 2 e^{-beta x} is positive.  The printed
        // root is a decreasing primitive; ship its negative.
        Interval qdom{-inf, -xm};
        Interval qwin{-xm - 50.0 / bet, -xm};
        Expr Qe = Expr::parse("lambda*(exp(-2*beta*x)-2*exp(-beta*x))/x^2");
        ClosedMap q = closed_map_from_expr(
            "-sqrt(lambda*(exp(-2*beta*x)-2*exp(-beta*x)))", ps, qdom);
        const double dx_ref = -xm - 1.0;
        Anchor danc{dx_ref, q.fn(dx_ref)};
        DeformationProfile def(name, expr_eval2(Qe, ps), qdom, ps, danc,
                               Qe.substitute(ps).serialize(), qwin);
        def.set_squared_map(squared_map_from_expr(
            "lambda*(exp(-2*beta*x)-2*exp(-beta*x))", ps, whole_line()));
        ClosedForms cf;
        cf.q = std::move(q);
        cf.V = closed_potential_from_qsq(
            "lambda*(exp(-2*beta*x)-2*exp(-beta*x))", ps, whole_line());
        return {std::move(mass), std::move(def), std::move(cf)};
    }

    if (name == "yukawa") {
        auto ps = merge_params({{"delta", 1.0}, {"v0", -1.0}}, user, name);
        const double del = ps.at("delta");
        const double v0 = ps.at("v0");
        require_positive_param(name, "delta", del);
        if (!(v0 < 0.0)) {
            std::ostringstream os;
            os << "profile 'yukawa': v0 must be < 0 for a positive mass on "
                  "x > 0, got "
               << v0;
            throw ConfigError(os.str());
        }
        Interval dom{0.0, inf};
        Expr me = Expr::parse("-(v0/4)*((delta*x+1)/x^3)*exp(-delta*x)");
        // No elementary primitive of sqrt(m) for the printed mass; the map
        // for it is quadrature-only (no closed q, default anchor).
        MassProfile mass = MassProfile::from_expression(name, me, ps, dom);
        Expr Qe = Expr::parse("-v0*exp(-delta*x)/x^3");
        // Printed root sqrt(-v0 e^{-delta x}/x) decreases; ship its negative.
        ClosedMap q =
            closed_map_from_expr("-sqrt(-v0*exp(-delta*x)/x)", ps, dom);
        Anchor danc{1.0, q.fn(1.0)};
        DeformationProfile def(name, expr_eval2(Qe, ps), dom, ps, danc,
                               Qe.substitute(ps).serialize());
        def.set_squared_map(
            squared_map_from_expr("-v0*exp(-delta*x)/x", ps, dom));
        ClosedForms cf;
        cf.q = std::move(q);
        cf.V = closed_potential_from_qsq("-v0*exp(-delta*x)/x", ps, dom);
        return {std::move(mass), std::move(def), std::move(cf)};
    }

    std::ostringstream os;
    os << "unknown profile '" << name << "'; available:";
    for (const auto& n : builtin_names()) os << " " << n;
    throw ConfigError(os.str());
}

} // namespace pdm
