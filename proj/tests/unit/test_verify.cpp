#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pdm/verify.hpp"

using namespace pdm;

namespace {

const ResidualReport& by_name(const std::vector<ResidualReport>& rs,
                              const std::string& name) {
    for (const auto& r : rs)
        if (r.check_name == name) return r;
    FAIL("missing report " + name);
    return rs.front();
}

} // namespace

TEST_CASE("standard suite on a flattening mass: everything second order") {
    const MassProfile p = builtin("asinh_log", {{"alpha", 0.1}}).mass;
    OscillatorConfig cfg;
    cfg.lo = -20.0;
    cfg.hi = 20.0;
    const auto reports = run_standard_suite(p, cfg);
    REQUIRE(reports.size() == 6);
    for (const auto& r : reports) {
        INFO(r.check_name << ": " << r.note);
        CHECK(r.passed);
        CHECK_FALSE(r.skipped);
    }

    const std::map<std::string, double> frozen = {
        {"ladder_commutator", 2.337e-07},     {"factorization", 1.413e-07},
        {"similarity", 2.455e-08},            {"hamiltonian_commutators", 5.692e-07},
        {"isospectral", 1.869e-04}};
    for (const auto& [name, final_res] : frozen) {
        const ResidualReport& r = by_name(reports, name);
        INFO(name);
        CHECK_THAT(r.residuals.back(),
                   Catch::Matchers::WithinRel(final_res, 0.05));
        CHECK(r.estimated_order > 1.8);
        CHECK(r.estimated_order < 2.2);
    }

    const ResidualReport& canon = by_name(reports, "canonical_commutator");
    for (double r : canon.residuals) CHECK(r <= 1e-10);
    CHECK(canon.note.find("exact stencil identity") != std::string::npos);
}

TEST_CASE("non-closure ordering is reported as a failure, not smoothed over") {
    const BuiltinTriple t = builtin("asinh_log", {{"alpha", 0.1}});
    OscillatorConfig cfg;
    cfg.lo = -20.0;
    cfg.hi = 20.0;
    cfg.ordering = ordering_from_a(0.0);
    const CoordinateMap map = build_map(t.mass);
    const ResidualReport r = check_ladder_commutator(t.mass, map, cfg);
    CHECK_FALSE(r.passed);
    CHECK_FALSE(r.skipped);
    // The residual converges to the closure defect alpha/4 instead of zero.
    CHECK_THAT(r.residuals.back(), Catch::Matchers::WithinAbs(0.025, 2e-3));
    CHECK(std::fabs(r.estimated_order) < 0.5);
}

TEST_CASE("uniform mass: identities sit at the roundoff floor and still pass") {
    const MassProfile p = builtin("constant").mass;
    OscillatorConfig cfg;
    const auto reports = run_standard_suite(p, cfg);
    for (const auto& r : reports) {
        INFO(r.check_name << ": " << r.note);
        CHECK(r.passed);
    }
    for (const char* name : {"ladder_commutator", "factorization",
                             "similarity", "hamiltonian_commutators"})
        CHECK(by_name(reports, name).note.find("waived") != std::string::npos);

    const ResidualReport& iso = by_name(reports, "isospectral");
    CHECK_FALSE(iso.skipped);
    CHECK_THAT(iso.residuals.back(),
               Catch::Matchers::WithinRel(4.763e-05, 0.05));
}

TEST_CASE("bounded target range turns the spectral claim into a skip") {
    const MassProfile p = builtin("rational_cubic").mass;
    OscillatorConfig cfg;
    const ResidualReport r = check_isospectral(p, cfg);
    CHECK(r.skipped);
    CHECK(r.passed);
    CHECK(r.residuals.empty());
    CHECK(r.note.find("does not cover the real line") != std::string::npos);
    CHECK(r.note.find("target range") != std::string::npos);

    // Skips are first-class in both output formats.
    const std::string table = format_reports({r});
    CHECK(table.find("SKIP") != std::string::npos);
}

TEST_CASE("a window too narrow for the low-lying states is a config error") {
    const MassProfile p = builtin("asinh_log", {{"alpha", 0.1}}).mass;
    OscillatorConfig cfg;
    cfg.lo = -2.0;
    cfg.hi = 2.0;
    CHECK_THROWS_AS(check_isospectral(p, cfg), ConfigError);
}

TEST_CASE("report serialization carries the full record") {
    const MassProfile p = builtin("constant").mass;
    OscillatorConfig cfg;
    const ResidualReport r = check_canonical(p, cfg, {500, 1000});
    const nlohmann::json j = report_to_json(r);
    REQUIRE(j.size() == 8);
    for (const char* key : {"check_name", "grid_sizes", "residuals",
                            "estimated_order", "passed", "threshold",
                            "skipped", "note"})
        CHECK(j.contains(key));
    CHECK(j["check_name"] == "canonical_commutator");
    CHECK(j["grid_sizes"].size() == 2);
    CHECK(j["passed"].is_boolean());

    const nlohmann::json arr = reports_to_json({r, r});
    CHECK(arr.is_array());
    CHECK(arr.size() == 2);
}
