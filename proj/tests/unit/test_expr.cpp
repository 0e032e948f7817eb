#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <string>

#include "pdm/expr.hpp"
#include "support/expr_gen.hpp"

using namespace pdm;

TEST_CASE("expression evaluation and precedence") {
    CHECK(Expr::parse("1+2*3").eval(0.0) == 7.0);
    CHECK(Expr::parse("(1+2)*3").eval(0.0) == 9.0);
    CHECK(Expr::parse("2^3^1").eval(0.0) == 8.0);
    CHECK(Expr::parse("-x^2").eval(3.0) == -9.0);
    CHECK(Expr::parse("1/(1+x^2)").eval(2.0) == 0.2);
}

TEST_CASE("bound parameters take effect and unbound ones are rejected") {
    const Expr e = Expr::parse("1/(1+a*x^2)");
    const std::map<std::string, double> params{{"a", 0.25}};
    CHECK(e.eval(2.0, params) == 0.5);
    CHECK_THROWS_AS(e.eval(2.0), ConfigError);

    const Expr sub = e.substitute(params);
    CHECK(sub.eval(2.0) == 0.5);
}

TEST_CASE("serialize round-trips through the parser") {
    const char* sources[] = {
        "1/(1+lambda*x^2)^3",
        "asinh(alpha*x)/alpha",
        "exp(-2*x)-2*exp(-x)",
        "sqrt(1-2*exp(-x))",
        "ln((1+x)/(1-x))/2",
    };
    const std::map<std::string, double> params{{"lambda", 0.7},
                                               {"alpha", 1.3}};
    // Probes sit inside every source's domain: the square root needs
    // x > ln 2, the log ratio needs x < 1.
    for (const char* src : sources) {
        const Expr a = Expr::parse(src);
        const Expr b = Expr::parse(a.serialize());
        for (double x : {0.75, 0.82, 0.95}) {
            CHECK(a.eval(x, params) == b.eval(x, params));
        }
    }
}

TEST_CASE("parse errors carry a position and a reason") {
    CHECK_THROWS_AS(Expr::parse(""), ParseError);
    CHECK_THROWS_AS(Expr::parse("1+"), ParseError);
    CHECK_THROWS_AS(Expr::parse("(1+x"), ParseError);
    CHECK_THROWS_AS(Expr::parse("frob(x)"), ParseError);
    CHECK_THROWS_AS(Expr::parse("1 2"), ParseError);
    CHECK_THROWS_AS(Expr::parse("1..5"), ParseError);
}

TEST_CASE("dual evaluation matches a closed-form derivative") {
    const Expr e = Expr::parse("asinh(x)^2");
    const Dual2 r = e.eval(var2(1.0));
    const double as = std::asinh(1.0);
    CHECK_THAT(r.v, Catch::Matchers::WithinRel(as * as, 1e-15));
    CHECK_THAT(r.d,
               Catch::Matchers::WithinRel(2.0 * as / std::sqrt(2.0), 1e-14));
}

TEST_CASE("generated expressions: dual derivatives agree with differences") {
    testgen::ExprGen gen(20240817);
    const std::map<std::string, double> params{{"a", 0.7}};
    const double probes[] = {-1.7, -0.6, 0.31, 1.2, 1.9};

    for (int trial = 0; trial < 80; ++trial) {
        const std::string src = gen.expression();
        const Expr e = Expr::parse(src);
        INFO("expression: " << src);
        for (double x : probes) {
            const Dual2 d = e.eval(var2(x), params);
            CHECK(d.v == e.eval(x, params));

            const double h = 1e-5 * std::max(1.0, std::fabs(x));
            const double fd =
                (e.eval(x + h, params) - e.eval(x - h, params)) / (2.0 * h);
            const double fdd = (e.eval(var2(x + h), params).d -
                                e.eval(var2(x - h), params).d) /
                               (2.0 * h);
            CHECK_THAT(d.d, Catch::Matchers::WithinAbs(
                                fd, 5e-5 * (1.0 + std::fabs(fd))));
            CHECK_THAT(d.dd, Catch::Matchers::WithinAbs(
                                 fdd, 5e-5 * (1.0 + std::fabs(fdd))));
        }
    }
}

TEST_CASE("non-finite results are rejected at evaluation") {
    const Expr e = Expr::parse("exp(x)");
    CHECK_THROWS_AS(e.eval(1e6), NumericError);
}
