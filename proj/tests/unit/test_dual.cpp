#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pdm/dual.hpp"

using namespace pdm;

TEST_CASE("dual arithmetic follows the product and quotient rules") {
    const Dual x = var(1.5);
    const Dual p = x * x;
    CHECK(p.v == 2.25);
    CHECK(p.d == 3.0);

    const Dual q = (x + 1.0) / x;
    CHECK_THAT(q.v, Catch::Matchers::WithinRel(2.5 / 1.5, 1e-15));
    // d/dx (1 + 1/x) = -1/x^2
    CHECK_THAT(q.d, Catch::Matchers::WithinAbs(-1.0 / 2.25, 1e-15));
}

TEST_CASE("dual elementary functions carry exact derivatives") {
    const Dual x = var(1.0);
    const Dual s = smath::asinh(x);
    CHECK_THAT(s.v, Catch::Matchers::WithinRel(std::asinh(1.0), 1e-15));
    CHECK_THAT(s.d, Catch::Matchers::WithinRel(1.0 / std::sqrt(2.0), 1e-15));

    const Dual e = smath::exp(x * 0.5);
    CHECK_THAT(e.d, Catch::Matchers::WithinRel(0.5 * std::exp(0.5), 1e-15));

    const Dual r = smath::sqrt(x + 3.0);
    CHECK_THAT(r.d, Catch::Matchers::WithinRel(0.25, 1e-15));

    const Dual w = smath::pow(x + 1.0, Dual{3.0, 0.0});
    CHECK(w.v == 8.0);
    CHECK(w.d == 12.0);
}

TEST_CASE("second-order duals track curvature") {
    const Dual2 x = var2(2.0);
    const Dual2 c = x * x * x;
    CHECK(c.v == 8.0);
    CHECK(c.d == 12.0);
    CHECK(c.dd == 12.0);

    // asinh''(x) = -x (1+x^2)^{-3/2}
    const Dual2 a = smath::asinh(var2(1.0));
    CHECK_THAT(a.dd, Catch::Matchers::WithinAbs(-1.0 / (2.0 * std::sqrt(2.0)),
                                                1e-15));

    const Dual2 g = smath::exp(var2(0.3) * -2.0);
    CHECK_THAT(g.dd, Catch::Matchers::WithinRel(4.0 * std::exp(-0.6), 1e-14));

    const Dual2 q = smath::sqrt(var2(4.0));
    CHECK_THAT(q.d, Catch::Matchers::WithinRel(0.25, 1e-15));
    CHECK_THAT(q.dd, Catch::Matchers::WithinRel(-1.0 / 32.0, 1e-15));
}

TEST_CASE("operations that would leave the reals are rejected") {
    CHECK_THROWS_AS((Dual2{1.0, 0.0, 0.0} / var2(0.0)), DomainError);
    CHECK_THROWS_AS(smath::ln(var2(-1.0)), DomainError);
    CHECK_THROWS_AS(smath::sqrt(var(-4.0)), DomainError);
    CHECK_THROWS_AS(smath::pow(var(-2.0), (Dual{0.5, 0.0})), DomainError);
    // integer exponents on a negative base stay real
    const Dual k = smath::pow(var(-2.0), Dual{2.0, 0.0});
    CHECK(k.v == 4.0);
    CHECK(k.d == -4.0);
}
