#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pdm/profiles.hpp"

using namespace pdm;

TEST_CASE("every built-in constructs with default parameters") {
    for (const auto& name : builtin_names()) {
        INFO("profile: " << name);
        const BuiltinTriple t = builtin(name);
        const double probe = t.mass.validation_window().clipped_midpoint();
        CHECK(t.mass.m(probe) > 0.0);
    }
}

TEST_CASE("unknown profiles and parameters are rejected with guidance") {
    CHECK_THROWS_WITH(builtin("cubic"),
                      Catch::Matchers::ContainsSubstring("rational_cubic"));
    CHECK_THROWS_AS(builtin("rational_cubic", {{"gamma", 1.0}}), ConfigError);
    CHECK_THROWS_AS(builtin("rational_cubic", {{"lambda", -1.0}}),
                    ConfigError);
    CHECK_THROWS_AS(builtin("yukawa", {{"v0", 1.0}}), ConfigError);
}

TEST_CASE("built-in mass values match hand-evaluated formulas") {
    CHECK(builtin("constant").mass.m(3.7) == 1.0);
    // (1 + x^2)^{-3} at x = 1
    CHECK(builtin("rational_cubic").mass.m(1.0) == 0.125);
    // (x^2 - 1)^{-3} at x = 2
    CHECK_THAT(builtin("singular_cubic").mass.m(2.0),
               Catch::Matchers::WithinRel(1.0 / 27.0, 1e-15));
    // (1 + sigma/2)^2 x^sigma at sigma = 2
    CHECK(builtin("power_law").mass.m(1.5) == 4.0 * 1.5 * 1.5);
    CHECK_THAT(builtin("asinh_log").mass.m(1.0),
               Catch::Matchers::WithinRel(0.5, 1e-15));
    const double u = std::exp(1.0);
    CHECK_THAT(builtin("morse").mass.m(1.0),
               Catch::Matchers::WithinRel(
                   (1.0 / u - 1.0) * (1.0 / u - 1.0) / (1.0 - 2.0 / u),
                   1e-14));
}

TEST_CASE("mass positivity is enforced on the validation window") {
    const Expr bad = Expr::parse("x^2-1");
    CHECK_THROWS_AS(
        MassProfile::from_expression("dips", bad, {}, whole_line()),
        DomainError);

    // Positive on the requested window even though it dips elsewhere.
    const MassProfile ok = MassProfile::from_expression(
        "shifted", bad, {}, Interval{2.0, 30.0});
    CHECK(ok.m(3.0) == 8.0);
    CHECK_THROWS_AS(ok.m(1.0), DomainError);
}

TEST_CASE("decaying masses may underflow to zero at evaluation time") {
    const MassProfile y = builtin("yukawa").mass;
    CHECK(y.m(800.0) == 0.0);
    CHECK_THROWS_AS(y.m(-1.0), DomainError);
}

TEST_CASE("deformation partners reproduce the mass through the bracket") {
    for (const auto& name :
         {"rational_cubic", "singular_cubic", "power_law", "asinh_log"}) {
        INFO("profile: " << name);
        const BuiltinTriple t = builtin(name);
        const MassProfile partner = mass_from_deformation(t.deformation);
        const Interval w = t.mass.validation_window();
        for (int k = 1; k < 40; ++k) {
            const double x = w.lo + (w.hi - w.lo) * k / 40.0;
            if (!partner.domain().contains(x) || !t.mass.domain().contains(x))
                continue;
            CHECK_THAT(partner.m(x), Catch::Matchers::WithinAbs(
                                         t.mass.m(x), 1e-10));
        }
    }
}

TEST_CASE("deformed potential uses the stable squared map") {
    const BuiltinTriple t = builtin("rational_cubic");
    const Potential V = deformed_potential(t.deformation, 1.0);
    // (1/2) x^2 / (1 + x^2) at x = 1
    CHECK_THAT(V(1.0), Catch::Matchers::WithinRel(0.25, 1e-14));
    const Dual d = V.dual(1.0);
    // d/dx x^2/(2(1+x^2)) = x/(1+x^2)^2
    CHECK_THAT(d.d, Catch::Matchers::WithinRel(0.25, 1e-13));
    CHECK_THROWS_AS(deformed_potential(t.deformation, 0.0), ConfigError);
}

TEST_CASE("deformation Q is finite at the origin despite the x^-2 form") {
    const BuiltinTriple t = builtin("asinh_log", {{"alpha", 0.5}});
    // Q(x) = (asinh(a x)/(a x))^2 -> 1 at x = 0
    CHECK_THAT(t.deformation.Q(1e-9), Catch::Matchers::WithinAbs(1.0, 1e-12));
    const double a2 = 0.25;
    CHECK_THAT(t.deformation.d2Q(0.0).dd,
               Catch::Matchers::WithinRel(-2.0 * a2 / 3.0, 1e-9));
}

TEST_CASE("zero potential is identically flat") {
    const Potential z = zero_potential();
    CHECK(z(17.0) == 0.0);
    CHECK(z.dual(-3.0).d == 0.0);
}
