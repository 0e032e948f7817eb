#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliResult {
    int status = -1;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string path =
        "pdmosc_cli_capture_" + std::to_string(counter++) + ".txt";
    const std::string cmd =
        std::string(PDMOSC_BIN) + " " + args + " > " + path + " 2>&1";
    const int rc = std::system(cmd.c_str());
    CliResult res;
    res.status = rc == -1 ? -1 : WEXITSTATUS(rc);
    res.out = slurp(path);
    std::remove(path.c_str());
    return res;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) out.push_back(line);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) out.push_back(cell);
    return out;
}

// First non-comment, non-header data row whose leading cell matches.
std::vector<std::string> data_row(const std::string& text,
                                  const std::string& first_cell) {
    for (const auto& line : lines_of(text)) {
        if (line.rfind(first_cell + ",", 0) == 0) return split_csv(line);
    }
    return {};
}

} // namespace

TEST_CASE("spectrum: uniform mass hits the closed levels") {
    const CliResult r =
        run_cli("spectrum --builtin constant --grid -12 12 2400 --levels 5");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("n,E_numeric,E_analytic,abs_err\n") != std::string::npos);
    const auto row = data_row(r.out, "0");
    REQUIRE(row.size() == 4);
    CHECK_THAT(std::stod(row[1]), Catch::Matchers::WithinAbs(0.5, 1e-5));
    CHECK(std::stod(row[3]) < 1e-5);
}

TEST_CASE("usage and config failures exit with code 1") {
    CHECK(run_cli("spectrum --frobnicate").status == 1);
    CHECK(run_cli("spectrum").status == 1);
    CHECK(run_cli("spectrum --builtin no_such_profile").status == 1);
    CHECK(run_cli("spectrum --builtin constant --m-expr 1").status == 1);
    CHECK(run_cli("spectrum --builtin rational_cubic --param lambda=abc")
              .status == 1);
    CHECK(run_cli("spectrum --builtin rational_cubic --param gamma=1")
              .status == 1);
    CHECK(run_cli("derive").status == 1);
    CHECK(run_cli("--help").status == 0);
}

TEST_CASE("numeric and domain failures exit with code 2") {
    // Non-closure ordering makes the ladder check fail honestly.
    const CliResult r = run_cli(
        "verify --builtin asinh_log --param alpha=0.1 --grid -20 20 1000 "
        "--suite ladder --ordering 0");
    CHECK(r.status == 2);
    CHECK(r.out.find("\"passed\": false") != std::string::npos);

    // Grid outside the profile domain.
    CHECK(run_cli("spectrum --builtin morse --grid -20 20 1000").status == 2);
}

TEST_CASE("bounded target range: skipped comparison with exit code 3") {
    const CliResult r = run_cli("spectrum --builtin rational_cubic");
    CHECK(r.status == 3);
    CHECK(r.out.find("# SKIPPED") != std::string::npos);
    CHECK(r.out.find("does not cover the real line") != std::string::npos);
    const auto row = data_row(r.out, "0");
    REQUIRE(row.size() == 4);
    // Ground level of the truncated problem, frozen; closed columns absent.
    CHECK_THAT(std::stod(row[1]),
               Catch::Matchers::WithinRel(1.3101147655812442, 1e-10));
    CHECK(row[2] == "nan");
    CHECK(row[3] == "nan");
}

TEST_CASE("derive: mass route matches the closed forms") {
    const CliResult r = run_cli("derive --from-m \"1/(1+x^2)\" --grid -2 2 19");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("x,m,Q,q,V\n") != std::string::npos);
    CHECK(r.out.find("# m(x) = ") != std::string::npos);
    const auto row = data_row(r.out, "1");
    REQUIRE(row.size() == 5);
    CHECK_THAT(std::stod(row[1]), Catch::Matchers::WithinAbs(0.5, 1e-12));
    // Q(1) = asinh(1)^2 through quadrature.
    CHECK_THAT(std::stod(row[2]),
               Catch::Matchers::WithinAbs(0.77681939989569881, 1e-10));
    // q(1) = asinh(1).
    CHECK_THAT(std::stod(row[3]),
               Catch::Matchers::WithinAbs(0.8813735870195430, 1e-10));
}

TEST_CASE("derive: deformation route recovers the bracket partner mass") {
    const CliResult r = run_cli("derive --from-Q \"1/(1+x^2)\" --grid -2 2 19");
    REQUIRE(r.status == 0);
    const auto row = data_row(r.out, "1");
    REQUIRE(row.size() == 5);
    // m = Q (xQ'/(2Q) + 1)^2 = 1/8 at x = 1.
    CHECK_THAT(std::stod(row[1]), Catch::Matchers::WithinAbs(0.125, 1e-9));
    CHECK_THAT(std::stod(row[2]), Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK_THAT(std::stod(row[3]),
               Catch::Matchers::WithinAbs(0.70710678118654752, 1e-9));
    CHECK_THAT(std::stod(row[4]), Catch::Matchers::WithinAbs(0.25, 1e-9));
}

TEST_CASE("eigenfunction: overlap with the analytic state") {
    const CliResult r = run_cli(
        "eigenfunction --builtin asinh_log --param alpha=0.1 --n 2 "
        "--grid -20 20 2000");
    REQUIRE(r.status == 0);
    const std::string tag = "# overlap (sign-aligned) = ";
    const auto pos = r.out.find(tag);
    REQUIRE(pos != std::string::npos);
    const double overlap = std::stod(r.out.substr(pos + tag.size()));
    CHECK(overlap > 0.99999);
    CHECK(overlap <= 1.0 + 1e-9);
    CHECK(r.out.find("x,phi_n_analytic,phi_n_grid\n") != std::string::npos);

    const CliResult b = run_cli("eigenfunction --builtin rational_cubic");
    CHECK(b.status == 3);
    CHECK(b.out.find("# SKIPPED") != std::string::npos);
}

TEST_CASE("classical: trajectory stream and domain-exit reporting") {
    const CliResult r = run_cli(
        "classical --builtin rational_cubic --x0 1 --v0 0 --dt 0.01 "
        "--steps 100");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("t,x,v,energy,pseudo_momentum\n") != std::string::npos);
    const auto ls = lines_of(r.out);
    // comment + header + initial point + 100 steps
    CHECK(ls.size() == 103);

    const CliResult e = run_cli(
        "classical --builtin power_law --x0 1 --v0 -1 --dt 0.001 "
        "--steps 5000 --V zero");
    REQUIRE(e.status == 0);
    CHECK(e.out.find("# domain exit: stopped after 500 of 5000 steps") !=
          std::string::npos);
}

TEST_CASE("identical invocations produce byte-identical files") {
    const std::string args =
        "spectrum --builtin asinh_log --param alpha=0.5 --grid -10 10 800 "
        "--levels 4 --output ";
    const CliResult a = run_cli(args + "pdmosc_det_a.csv");
    const CliResult b = run_cli(args + "pdmosc_det_b.csv");
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    const std::string fa = slurp("pdmosc_det_a.csv");
    const std::string fb = slurp("pdmosc_det_b.csv");
    CHECK(!fa.empty());
    CHECK(fa == fb);
    std::remove("pdmosc_det_a.csv");
    std::remove("pdmosc_det_b.csv");
}

TEST_CASE("verify: csv format carries one row per check") {
    const CliResult r = run_cli(
        "verify --builtin rational_cubic --suite isospectral --format csv");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("check,final_residual,estimated_order,passed,skipped,"
                     "note\n") != std::string::npos);
    CHECK(r.out.find("isospectral,") != std::string::npos);
    CHECK(r.out.find(",true,true,") != std::string::npos);
}
