// pdmosc: command-line front end for the position-dependent-mass oscillator
// toolkit.  Every subcommand is deterministic: identical invocations produce
// byte-identical output.
//
// Exit codes: 0 success, 1 usage/config error, 2 numerical or domain
// failure (including failed verification), 3 comparison skipped because the
// profile's target range does not cover the real line.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdm/pdm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitSkipped = 3;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- profile resolution ------------------------------------------------------

struct ProfileSpec {
    std::string builtin;
    std::string m_expr;
    std::string q_expr;
    std::vector<std::string> raw_params;
    std::vector<double> domain;
};

void add_profile_flags(CLI::App* cmd, ProfileSpec& ps) {
    cmd->add_option("--builtin", ps.builtin, "built-in profile name");
    cmd->add_option("--param", ps.raw_params,
                    "profile parameter as name=value (repeatable)");
    cmd->add_option("--m-expr", ps.m_expr, "mass profile m(x) as an expression");
    cmd->add_option("--Q-expr", ps.q_expr,
                    "deformation profile Q(x) as an expression");
    cmd->add_option("--domain", ps.domain,
                    "open domain (lo hi) for expression profiles")
        ->expected(2);
}

std::map<std::string, double> parse_params(
    const std::vector<std::string>& raw) {
    std::map<std::string, double> out;
    for (const auto& kv : raw) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw pdm::ConfigError("--param expects name=value, got '" + kv +
                                   "'");
        }
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != val.size()) {
            throw pdm::ConfigError("--param " + key +
                                   ": cannot parse value '" + val + "'");
        }
        out[key] = v;
    }
    return out;
}

struct ResolvedProfile {
    pdm::MassProfile mass;
    std::optional<pdm::DeformationProfile> deformation;
    pdm::ClosedForms closed;
};

pdm::Interval domain_from(const std::vector<double>& d) {
    if (d.empty()) return pdm::whole_line();
    if (!(d[0] < d[1]))
        throw pdm::ConfigError("--domain: lo must be strictly below hi");
    return pdm::Interval{d[0], d[1]};
}

ResolvedProfile resolve_profile(const ProfileSpec& ps) {
    const int given = (ps.builtin.empty() ? 0 : 1) +
                      (ps.m_expr.empty() ? 0 : 1) +
                      (ps.q_expr.empty() ? 0 : 1);
    if (given != 1) {
        throw pdm::ConfigError(
            "give exactly one of --builtin, --m-expr, --Q-expr");
    }
    const auto params = parse_params(ps.raw_params);
    if (!ps.builtin.empty()) {
        if (!ps.domain.empty()) {
            throw pdm::ConfigError(
                "--domain applies to expression profiles; built-ins carry "
                "their own domain");
        }
        pdm::BuiltinTriple t = pdm::builtin(ps.builtin, params);
        return {t.mass, t.deformation, t.closed};
    }
    const pdm::Interval dom = domain_from(ps.domain);
    if (!ps.m_expr.empty()) {
        const pdm::Expr e = pdm::Expr::parse(ps.m_expr);
        pdm::MassProfile m = pdm::MassProfile::from_expression(
            "m-expr", e, params, dom);
        return {std::move(m), std::nullopt, {}};
    }
    const pdm::Expr e = pdm::Expr::parse(ps.q_expr);
    auto bound = params;
    auto fn = [e, bound](double x) { return e.eval(pdm::var2(x), bound); };
    pdm::DeformationProfile d("Q-expr", fn, dom, params, std::nullopt,
                              e.serialize());
    pdm::MassProfile m = pdm::mass_from_deformation(d);
    return {std::move(m), std::move(d), {}};
}

// ---- output plumbing ---------------------------------------------------------

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file.open(path, std::ios::binary);
        if (!file) throw pdm::ConfigError("cannot open output file " + path);
        os = &file;
    }
    std::ostream& stream() { return *os; }
};

struct GridArgs {
    double lo = -10.0;
    double hi = 10.0;
    int n = 1000;
};

void add_grid_flag(CLI::App* cmd, std::vector<double>& raw,
                   const char* help = "grid as xmin xmax n") {
    cmd->add_option("--grid", raw, help)->expected(3);
}

GridArgs grid_from(const std::vector<double>& raw, GridArgs defaults) {
    if (raw.empty()) return defaults;
    GridArgs g;
    g.lo = raw[0];
    g.hi = raw[1];
    g.n = static_cast<int>(std::llround(raw[2]));
    return g;
}

pdm::OscillatorConfig make_config(double omega, const GridArgs& g,
                                  double ordering_a) {
    pdm::OscillatorConfig cfg;
    cfg.omega = omega;
    cfg.lo = g.lo;
    cfg.hi = g.hi;
    cfg.n = g.n;
    cfg.ordering = pdm::ordering_from_a(ordering_a);
    pdm::validate(cfg);
    return cfg;
}

// ---- spectrum ----------------------------------------------------------------

struct SpectrumArgs {
    ProfileSpec profile;
    double omega = 1.0;
    std::vector<double> grid_raw;
    int levels = 6;
    std::string hamiltonian = "h1";
    double ordering_a = -0.25;
    std::string output;
    std::string format = "csv";
};

int run_spectrum(const SpectrumArgs& a) {
    ResolvedProfile rp = resolve_profile(a.profile);
    const GridArgs g = grid_from(a.grid_raw, {-10.0, 10.0, 1000});
    const pdm::OscillatorConfig cfg = make_config(a.omega, g, a.ordering_a);
    if (a.levels < 1 || a.levels > cfg.n)
        throw pdm::ConfigError("--levels must be in [1, n]");

    const pdm::CoordinateMap map = pdm::build_map(rp.mass);
    const bool bounded = !map.range().onto_reals();

    pdm::GridOperator H = [&]() {
        if (a.hamiltonian == "h2q") {
            const pdm::Grid gq =
                pdm::make_grid(map.forward(g.lo), map.forward(g.hi), g.n,
                               pdm::Coord::Q);
            const double w2h = 0.5 * cfg.omega * cfg.omega;
            return pdm::hamiltonian_H2_on_q(
                cfg, [w2h](double q) { return w2h * q * q; }, gq);
        }
        const pdm::Potential V = pdm::oscillator_potential(map, cfg.omega);
        auto vfn = [V](double x) { return V(x); };
        if (a.hamiltonian == "vonroos") {
            const pdm::Grid gx = cfg.grid();
            return pdm::add(pdm::kinetic_vonroos(rp.mass, gx, cfg.ordering),
                            pdm::GridOperator::diagonal(gx, vfn));
        }
        return pdm::hamiltonian_H1(rp.mass, cfg.grid(), cfg, vfn);
    }();

    const pdm::Spectrum s = pdm::eigen_symmetric_tridiagonal(H, a.levels);
    const double nan = std::nan("");

    Output out(a.output);
    if (a.format == "json") {
        nlohmann::json j;
        j["profile"] = rp.mass.name();
        j["omega"] = cfg.omega;
        j["hamiltonian"] = a.hamiltonian;
        j["skipped"] = bounded;
        if (bounded) j["target_range"] = map.range().str();
        auto rows = nlohmann::json::array();
        for (int k = 0; k < a.levels; ++k) {
            const double e = s.eigenvalues[static_cast<std::size_t>(k)];
            nlohmann::json row;
            row["n"] = k;
            row["E_numeric"] = e;
            if (!bounded) {
                row["E_analytic"] = pdm::analytic_energy(k, cfg.omega);
                row["abs_err"] =
                    std::fabs(e - pdm::analytic_energy(k, cfg.omega));
            }
            rows.push_back(row);
        }
        j["levels"] = rows;
        out.stream() << j.dump(2) << "\n";
    } else {
        out.stream() << "# spectrum profile=" << rp.mass.name()
                     << " omega=" << num(cfg.omega)
                     << " hamiltonian=" << a.hamiltonian << " grid=["
                     << num(g.lo) << ", " << num(g.hi) << "] n=" << g.n
                     << "\n";
        if (bounded) {
            out.stream() << "# SKIPPED: target range " << map.range().str()
                         << " does not cover the real line; the closed "
                            "spectrum is not secured, E_analytic omitted\n";
        }
        out.stream() << "n,E_numeric,E_analytic,abs_err\n";
        for (int k = 0; k < a.levels; ++k) {
            const double e = s.eigenvalues[static_cast<std::size_t>(k)];
            const double ea =
                bounded ? nan : pdm::analytic_energy(k, cfg.omega);
            out.stream() << k << "," << num(e) << "," << num(ea) << ","
                         << num(bounded ? nan : std::fabs(e - ea)) << "\n";
        }
    }
    return bounded ? kExitSkipped : kExitOk;
}

// ---- derive ------------------------------------------------------------------

struct DeriveArgs {
    std::string from_m;
    std::string from_q;
    std::vector<std::string> raw_params;
    std::vector<double> domain;
    double omega = 1.0;
    std::vector<double> grid_raw;
    std::string output;
    std::string format = "csv";
};

bool is_builtin_name(const std::string& s) {
    for (const auto& n : pdm::builtin_names())
        if (n == s) return true;
    return false;
}

int run_derive(const DeriveArgs& a) {
    if (a.from_m.empty() == a.from_q.empty())
        throw pdm::ConfigError("give exactly one of --from-m, --from-Q");
    const auto params = parse_params(a.raw_params);
    const std::string& text = a.from_m.empty() ? a.from_q : a.from_m;

    ResolvedProfile rp = [&]() -> ResolvedProfile {
        if (is_builtin_name(text)) {
            pdm::BuiltinTriple t = pdm::builtin(text, params);
            return {t.mass, t.deformation, t.closed};
        }
        ProfileSpec ps;
        ps.raw_params = a.raw_params;
        ps.domain = a.domain;
        (a.from_m.empty() ? ps.q_expr : ps.m_expr) = text;
        return resolve_profile(ps);
    }();

    const pdm::CoordinateMap map = pdm::build_map(rp.mass);
    if (!rp.deformation)
        rp.deformation = pdm::deformation_from_mass(rp.mass, map);

    const GridArgs g = grid_from(a.grid_raw, {-5.0, 5.0, 200});
    const pdm::Grid grid = pdm::make_grid(g.lo, g.hi, g.n);

    Output out(a.output);
    std::ostream& os = out.stream();
    os << "# derive " << (a.from_m.empty() ? "from-Q" : "from-m") << "="
       << text << " omega=" << num(a.omega) << "\n";
    if (rp.mass.formula())
        os << "# m(x) = " << *rp.mass.formula() << "\n";
    if (rp.deformation->formula())
        os << "# Q(x) = " << *rp.deformation->formula() << "\n";
    if (rp.closed.q)
        os << "# closed-form q(x) = " << rp.closed.q->formula << "\n";
    if (rp.closed.V)
        os << "# closed-form V(x) = " << rp.closed.V->formula << "\n";

    const double w2h = 0.5 * a.omega * a.omega;
    const double nan = std::nan("");
    auto col = [&](auto fn) {
        try {
            return double(fn());
        } catch (const pdm::DomainError&) {
            return nan;
        }
    };

    if (a.format == "json") {
        auto rows = nlohmann::json::array();
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.point(i);
            const double q = map.forward(x);
            nlohmann::json row;
            row["x"] = x;
            row["m"] = col([&] { return rp.mass.m(x); });
            row["Q"] = col([&] { return rp.deformation->Q(x); });
            row["q"] = q;
            row["V"] = w2h * q * q;
            rows.push_back(row);
        }
        os << rows.dump(2) << "\n";
    } else {
        os << "x,m,Q,q,V\n";
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.point(i);
            const double q = map.forward(x);
            os << num(x) << "," << num(col([&] { return rp.mass.m(x); }))
               << "," << num(col([&] { return rp.deformation->Q(x); })) << ","
               << num(q) << "," << num(w2h * q * q) << "\n";
        }
    }
    return kExitOk;
}

// ---- verify ------------------------------------------------------------------

struct VerifyArgs {
    ProfileSpec profile;
    std::string suite = "all";
    double omega = 1.0;
    std::vector<double> grid_raw;
    double ordering_a = -0.25;
    std::string output;
    std::string format = "json";
};

int run_verify(const VerifyArgs& a) {
    ResolvedProfile rp = resolve_profile(a.profile);
    const GridArgs g = grid_from(a.grid_raw, {-10.0, 10.0, 1000});
    const pdm::OscillatorConfig cfg = make_config(a.omega, g, a.ordering_a);

    std::vector<pdm::ResidualReport> reps;
    if (a.suite == "all") {
        reps = pdm::run_standard_suite(rp.mass, cfg);
    } else {
        const pdm::CoordinateMap map = pdm::build_map(rp.mass);
        const pdm::Potential V = pdm::oscillator_potential(map, cfg.omega);
        auto vfn = [V](double x) { return V(x); };
        if (a.suite == "canonical")
            reps.push_back(pdm::check_canonical(rp.mass, cfg));
        else if (a.suite == "ladder")
            reps.push_back(pdm::check_ladder_commutator(rp.mass, map, cfg));
        else if (a.suite == "factorization")
            reps.push_back(pdm::check_factorization(rp.mass, map, cfg));
        else if (a.suite == "similarity")
            reps.push_back(pdm::check_similarity(rp.mass, cfg, vfn));
        else if (a.suite == "isospectral")
            reps.push_back(pdm::check_isospectral(rp.mass, cfg));
        else if (a.suite == "hamiltonian-commutators")
            reps.push_back(
                pdm::check_hamiltonian_commutators(rp.mass, map, cfg));
        else
            throw pdm::ConfigError("unknown suite '" + a.suite + "'");
    }

    Output out(a.output);
    if (a.format == "json") {
        out.stream() << pdm::reports_to_json(reps).dump(2) << "\n";
    } else {
        out.stream() << "check,final_residual,estimated_order,passed,skipped,"
                        "note\n";
        for (const auto& r : reps) {
            out.stream() << r.check_name << ","
                         << num(r.residuals.empty() ? 0.0
                                                    : r.residuals.back())
                         << "," << num(r.estimated_order) << ","
                         << (r.passed ? "true" : "false") << ","
                         << (r.skipped ? "true" : "false") << ",\""
                         << r.note << "\"\n";
        }
    }

    std::string failing;
    for (const auto& r : reps)
        if (!r.skipped && !r.passed) failing += " " + r.check_name;
    if (!failing.empty()) {
        std::cerr << "verify: failing checks:" << failing << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}

// ---- eigenfunction -----------------------------------------------------------

struct EigenfunctionArgs {
    ProfileSpec profile;
    int level = 0;
    double omega = 1.0;
    std::vector<double> grid_raw;
    double ordering_a = -0.25;
    std::string output;
    std::string format = "csv";
};

int run_eigenfunction(const EigenfunctionArgs& a) {
    if (a.level < 0) throw pdm::ConfigError("--n must be >= 0");
    ResolvedProfile rp = resolve_profile(a.profile);
    const GridArgs g = grid_from(a.grid_raw, {-10.0, 10.0, 1000});
    const pdm::OscillatorConfig cfg = make_config(a.omega, g, a.ordering_a);

    const pdm::CoordinateMap map = pdm::build_map(rp.mass);
    const bool bounded = !map.range().onto_reals();
    const pdm::Potential V = pdm::oscillator_potential(map, cfg.omega);
    const pdm::Grid grid = cfg.grid();
    const pdm::GridOperator H = pdm::hamiltonian_H1(
        rp.mass, grid, cfg, [V](double x) { return V(x); });
    const pdm::Spectrum s = pdm::eigen_symmetric_tridiagonal(H, a.level + 1);
    std::vector<double> v = s.eigenvectors[static_cast<std::size_t>(a.level)];

    const double nan = std::nan("");
    std::vector<double> phi(static_cast<std::size_t>(grid.n), nan);
    double overlap = nan;
    if (!bounded) {
        const pdm::AnalyticState st(a.level, cfg.omega);
        double norm2 = 0.0;
        for (int i = 0; i < grid.n; ++i) {
            const double p = st.phi(rp.mass, map, grid.point(i));
            phi[static_cast<std::size_t>(i)] = p;
            norm2 += p * p * grid.h();
        }
        double dot = 0.0;
        for (int i = 0; i < grid.n; ++i)
            dot += v[static_cast<std::size_t>(i)] *
                   phi[static_cast<std::size_t>(i)] * grid.h();
        overlap = dot / std::sqrt(norm2);
        if (overlap < 0.0) {
            overlap = -overlap;
            for (auto& e : v) e = -e;
        }
    }

    Output out(a.output);
    std::ostream& os = out.stream();
    if (a.format == "json") {
        nlohmann::json j;
        j["profile"] = rp.mass.name();
        j["n"] = a.level;
        j["omega"] = cfg.omega;
        j["energy"] = s.eigenvalues[static_cast<std::size_t>(a.level)];
        j["skipped"] = bounded;
        if (bounded)
            j["target_range"] = map.range().str();
        else
            j["overlap"] = overlap;
        auto rows = nlohmann::json::array();
        for (int i = 0; i < grid.n; ++i) {
            nlohmann::json row;
            row["x"] = grid.point(i);
            if (!bounded)
                row["phi_analytic"] = phi[static_cast<std::size_t>(i)];
            row["phi_grid"] = v[static_cast<std::size_t>(i)];
            rows.push_back(row);
        }
        j["samples"] = rows;
        os << j.dump(2) << "\n";
    } else {
        os << "# eigenfunction profile=" << rp.mass.name() << " n=" << a.level
           << " omega=" << num(cfg.omega) << " E=" <<
            num(s.eigenvalues[static_cast<std::size_t>(a.level)]) << "\n";
        if (bounded) {
            os << "# SKIPPED: target range " << map.range().str()
               << " does not cover the real line; analytic eigenfunction "
                  "comparison not applicable\n";
        } else {
            os << "# overlap (sign-aligned) = " << num(overlap) << "\n";
        }
        os << "x,phi_n_analytic,phi_n_grid\n";
        for (int i = 0; i < grid.n; ++i) {
            os << num(grid.point(i)) << ","
               << num(phi[static_cast<std::size_t>(i)]) << ","
               << num(v[static_cast<std::size_t>(i)]) << "\n";
        }
    }
    return bounded ? kExitSkipped : kExitOk;
}

// ---- classical ---------------------------------------------------------------

struct ClassicalArgs {
    ProfileSpec profile;
    double x0 = 1.0;
    double v0 = 0.0;
    double dt = 1e-3;
    int steps = 1000;
    std::string potential = "oscillator";
    double omega = 1.0;
    std::string output;
    std::string format = "csv";
};

int run_classical(const ClassicalArgs& a) {
    ResolvedProfile rp = resolve_profile(a.profile);
    const pdm::Potential V = [&]() {
        if (a.potential == "zero") return pdm::zero_potential();
        const pdm::CoordinateMap map = pdm::build_map(rp.mass);
        return pdm::oscillator_potential(map, a.omega);
    }();

    const pdm::Trajectory tr =
        pdm::integrate(rp.mass, V, a.x0, a.v0, a.dt, a.steps);

    Output out(a.output);
    std::ostream& os = out.stream();
    if (a.format == "json") {
        nlohmann::json j;
        j["profile"] = rp.mass.name();
        j["potential"] = a.potential;
        j["domain_exit"] = tr.domain_exit;
        j["note"] = tr.note;
        auto rows = nlohmann::json::array();
        for (const auto& p : tr.points) {
            nlohmann::json row;
            row["t"] = p.t;
            row["x"] = p.x;
            row["v"] = p.v;
            row["energy"] = p.energy;
            row["pseudo_momentum"] = p.pseudo_momentum;
            rows.push_back(row);
        }
        j["points"] = rows;
        os << j.dump(2) << "\n";
    } else {
        os << "# classical profile=" << rp.mass.name()
           << " potential=" << a.potential << " x0=" << num(a.x0)
           << " v0=" << num(a.v0) << " dt=" << num(a.dt)
           << " steps=" << a.steps << "\n";
        if (tr.domain_exit) os << "# domain exit: " << tr.note << "\n";
        os << "t,x,v,energy,pseudo_momentum\n";
        for (const auto& p : tr.points) {
            os << num(p.t) << "," << num(p.x) << "," << num(p.v) << ","
               << num(p.energy) << "," << num(p.pseudo_momentum) << "\n";
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "pdmosc: position-dependent-mass oscillator toolkit\n"
        "Ladder algebra, spectra, coordinate maps, and classical dynamics "
        "for masses that vary with position."};
    app.require_subcommand(1);

    SpectrumArgs sa;
    CLI::App* sp = app.add_subcommand(
        "spectrum", "eigenvalues of a PDM Hamiltonian vs the closed spectrum");
    add_profile_flags(sp, sa.profile);
    sp->add_option("--omega", sa.omega, "oscillator frequency");
    add_grid_flag(sp, sa.grid_raw);
    sp->add_option("--levels", sa.levels, "number of levels (default 6)");
    sp->add_option("--hamiltonian", sa.hamiltonian,
                   "operator assembly: h1, h2q, or vonroos")
        ->check(CLI::IsMember({"h1", "h2q", "vonroos"}));
    sp->add_option("--ordering", sa.ordering_a,
                   "ordering parameter a (b = -1/2 - a)");
    sp->add_option("--output", sa.output, "write to file instead of stdout");
    sp->add_option("--format", sa.format)->check(CLI::IsMember({"csv", "json"}));

    DeriveArgs da;
    CLI::App* dv = app.add_subcommand(
        "derive", "derive the mass/deformation partner and the target map");
    dv->add_option("--from-m", da.from_m,
                   "mass profile: expression in x, or a built-in name");
    dv->add_option("--from-Q", da.from_q,
                   "deformation profile: expression in x, or a built-in name");
    dv->add_option("--param", da.raw_params, "parameter name=value");
    dv->add_option("--domain", da.domain, "open domain (lo hi) for expressions")
        ->expected(2);
    dv->add_option("--omega", da.omega, "oscillator frequency");
    add_grid_flag(dv, da.grid_raw, "sample grid as xmin xmax n");
    dv->add_option("--output", da.output, "write to file instead of stdout");
    dv->add_option("--format", da.format)->check(CLI::IsMember({"csv", "json"}));

    VerifyArgs va;
    CLI::App* vf = app.add_subcommand(
        "verify", "run operator-identity residual checks");
    add_profile_flags(vf, va.profile);
    vf->add_option("--suite", va.suite,
                   "canonical, ladder, factorization, similarity, "
                   "isospectral, hamiltonian-commutators, or all")
        ->check(CLI::IsMember({"canonical", "ladder", "factorization",
                               "similarity", "isospectral",
                               "hamiltonian-commutators", "all"}));
    vf->add_option("--omega", va.omega, "oscillator frequency");
    add_grid_flag(vf, va.grid_raw, "base window as xmin xmax n (n unused)");
    vf->add_option("--ordering", va.ordering_a,
                   "ordering parameter a (b = -1/2 - a)");
    vf->add_option("--output", va.output, "write to file instead of stdout");
    vf->add_option("--format", va.format)->check(CLI::IsMember({"csv", "json"}));

    EigenfunctionArgs ea;
    CLI::App* ef = app.add_subcommand(
        "eigenfunction", "grid eigenvector vs analytic eigenfunction");
    add_profile_flags(ef, ea.profile);
    ef->add_option("--n", ea.level, "level index (0 = ground state)");
    ef->add_option("--omega", ea.omega, "oscillator frequency");
    add_grid_flag(ef, ea.grid_raw);
    ef->add_option("--ordering", ea.ordering_a,
                   "ordering parameter a (b = -1/2 - a)");
    ef->add_option("--output", ea.output, "write to file instead of stdout");
    ef->add_option("--format", ea.format)->check(CLI::IsMember({"csv", "json"}));

    ClassicalArgs ca;
    CLI::App* cl = app.add_subcommand(
        "classical", "integrate the PDM Newton equation");
    add_profile_flags(cl, ca.profile);
    cl->add_option("--x0", ca.x0, "initial position");
    cl->add_option("--v0", ca.v0, "initial velocity");
    cl->add_option("--dt", ca.dt, "time step");
    cl->add_option("--steps", ca.steps, "number of steps");
    cl->add_option("--V", ca.potential, "potential: zero or oscillator")
        ->check(CLI::IsMember({"zero", "oscillator"}));
    cl->add_option("--omega", ca.omega, "oscillator frequency");
    cl->add_option("--output", ca.output, "write to file instead of stdout");
    cl->add_option("--format", ca.format)->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
        if (sp->parsed()) return run_spectrum(sa);
        if (dv->parsed()) return run_derive(da);
        if (vf->parsed()) return run_verify(va);
        if (ef->parsed()) return run_eigenfunction(ea);
        if (cl->parsed()) return run_classical(ca);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    } catch (const pdm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pdm::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const pdm::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const pdm::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
