#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "pdm/classical.hpp"
#include "pdm/coord.hpp"

using namespace pdm;

TEST_CASE("acceleration oracles") {
    const MassProfile c = builtin("constant").mass;
    const CoordinateMap map = build_map(c);
    const Potential Vo = oscillator_potential(map, 1.0);
    // Uniform mass, unit frequency: plain -x restoring force.
    CHECK_THAT(acceleration(c, Vo, 1.0, 0.0),
               Catch::Matchers::WithinAbs(-1.0, 1e-14));

    // Free motion on m = (1+x^2)^{-3}: a = -m' v^2 / (2m) = 3x v^2/(1+x^2),
    // exact dyadic arithmetic at x = v = 1.
    const MassProfile rc = builtin("rational_cubic").mass;
    const Potential Vz = zero_potential();
    CHECK(acceleration(rc, Vz, 1.0, 1.0) == 1.5);
    // At rest with no potential there is no force at all.
    CHECK(acceleration(rc, Vz, 0.7, 0.0) == 0.0);

    // A mass that underflows to zero cannot carry dynamics.
    const MassProfile yk = builtin("yukawa").mass;
    CHECK_THROWS_AS(acceleration(yk, Vz, 800.0, 1.0), DomainError);
}

TEST_CASE("integrator input guards") {
    const MassProfile c = builtin("constant").mass;
    const Potential Vz = zero_potential();
    CHECK_THROWS_AS(integrate(c, Vz, 0.0, 1.0, 0.0, 10), ConfigError);
    CHECK_THROWS_AS(integrate(c, Vz, 0.0, 1.0, -1e-3, 10), ConfigError);
    CHECK_THROWS_AS(integrate(c, Vz, 0.0, 1.0, 1e-3, 0), ConfigError);
}

TEST_CASE("uniform-mass oscillator returns to its start after one period") {
    const MassProfile c = builtin("constant").mass;
    const CoordinateMap map = build_map(c);
    const Potential V = oscillator_potential(map, 1.0);
    const Trajectory tr = integrate(c, V, 1.0, 0.0, 1e-3, 6284);
    REQUIRE(tr.points.size() == 6285);
    CHECK_FALSE(tr.domain_exit);

    const TrajectoryPoint& first = tr.points.front();
    CHECK(first.t == 0.0);
    CHECK(first.x == 1.0);
    CHECK(first.energy == 0.5);

    const TrajectoryPoint& last = tr.points.back();
    CHECK_THAT(last.x, Catch::Matchers::WithinAbs(std::cos(6.284), 1e-12));
    CHECK_THAT(last.x, Catch::Matchers::WithinAbs(1.0, 1e-6));
    CHECK_THAT(last.energy, Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("step halving shows fourth-order convergence") {
    const MassProfile c = builtin("constant").mass;
    const CoordinateMap map = build_map(c);
    const Potential V = oscillator_potential(map, 1.0);
    double errs[3];
    int idx = 0;
    for (double dt : {1.6e-2, 8e-3, 4e-3}) {
        const int steps = static_cast<int>(std::lround(20.0 / dt));
        const Trajectory tr = integrate(c, V, 1.0, 0.0, dt, steps);
        errs[idx++] = std::fabs(tr.points.back().x - std::cos(20.0));
    }
    CHECK(std::log2(errs[0] / errs[1]) > 3.5);
    CHECK(std::log2(errs[1] / errs[2]) > 3.5);
}

TEST_CASE("free motion conserves the pseudo-momentum through a runaway") {
    // On the flattening profile a free particle accelerates without bound in
    // x while sqrt(m) v stays pinned at its initial value.
    const MassProfile p = builtin("asinh_log", {{"alpha", 1.0}}).mass;
    const Potential V = zero_potential();
    const Trajectory tr = integrate(p, V, 0.0, 1.0, 1e-2, 5000);
    CHECK_FALSE(tr.domain_exit);
    CHECK(tr.points.front().pseudo_momentum == 1.0);
    double drift = 0.0;
    for (const auto& pt : tr.points)
        drift = std::max(drift, std::fabs(pt.pseudo_momentum - 1.0));
    CHECK(drift < 1e-8);
    CHECK(tr.points.back().x > 1e20);
}

TEST_CASE("deformed potential conserves the energy") {
    const BuiltinTriple t = builtin("rational_cubic", {{"lambda", 0.1}});
    const Potential V = deformed_potential(t.deformation, 1.0);
    const Trajectory tr = integrate(t.mass, V, 2.0, 0.0, 1e-3, 20000);
    CHECK_FALSE(tr.domain_exit);
    const double E0 = tr.points.front().energy;
    CHECK_THAT(E0, Catch::Matchers::WithinRel(10.0 / 7.0, 1e-14));
    double drift = 0.0;
    for (const auto& pt : tr.points)
        drift = std::max(drift, std::fabs(pt.energy - E0));
    CHECK(drift / E0 < 1e-8);
}

TEST_CASE("a vanishing-mass edge is reached in finite time") {
    // m = 4x^2 on (0, inf) with v0 < 0: sqrt(m) v conserved means
    // v = -1/x, so x^2 = 1 - 2t hits the edge at t = 1/2 exactly.
    const MassProfile p = builtin("power_law").mass;
    const Potential V = zero_potential();
    const Trajectory tr = integrate(p, V, 1.0, -1.0, 1e-3, 5000);
    CHECK(tr.domain_exit);
    CHECK(tr.points.size() == 501);
    CHECK_THAT(tr.points.back().t, Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK(tr.note.find("outside domain") != std::string::npos);
    CHECK(tr.note.find("stopped after 500 of 5000") != std::string::npos);
}

TEST_CASE("a diverging-mass wall is reached in finite time with dying speed") {
    // The travel time (q(x0) - q(wall)) / |sqrt(m) v| is finite because the
    // mass root stays integrable, so the trajectory meets the wall with
    // v -> 0 rather than hovering in front of it.
    const MassProfile p = builtin("morse").mass;
    const Potential V = zero_potential();
    const Trajectory tr = integrate(p, V, 2.0, -1.0, 1e-3, 5000);
    CHECK(tr.domain_exit);
    const TrajectoryPoint& last = tr.points.back();
    CHECK(last.t > 1.60);
    CHECK(last.t < 1.72);
    CHECK_THAT(last.x, Catch::Matchers::WithinAbs(std::numbers::ln2, 1e-3));
    CHECK(std::fabs(last.v) < 0.01);
    CHECK_FALSE(tr.note.empty());
}
