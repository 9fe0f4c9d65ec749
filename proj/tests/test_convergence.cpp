#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "ratstep/convergence.hpp"
#include "ratstep/error.hpp"

using namespace ratstep;

TEST_CASE("observed orders from error ratios") {
    const std::vector<double> e1{1e-2, 2.5e-3};
    const std::vector<long> n1{10, 20};
    const auto o1 = estimate_orders(e1, n1);
    CHECK(o1[0].kind == ObservedOrder::Kind::None);
    REQUIRE(o1[1].kind == ObservedOrder::Kind::Value);
    CHECK(o1[1].value == doctest::Approx(2.0));

    const std::vector<double> e2{1e-3, 1e-3 * std::pow(2.0 / 3.0, 4)};
    const std::vector<long> n2{240, 360};
    CHECK(estimate_orders(e2, n2)[1].value == doctest::Approx(4.0));
}

TEST_CASE("floor marker") {
    const std::vector<long> n{75, 90};
    CHECK(estimate_orders(std::vector<double>{1e-13, 9e-14}, n)[1].kind == ObservedOrder::Kind::Floor);
    // Non-decreasing error below 1e-11 is at the floor too.
    CHECK(estimate_orders(std::vector<double>{5e-12, 6e-12}, n)[1].kind == ObservedOrder::Kind::Floor);
    // Non-decreasing error above 1e-11 is reported as a (negative) order.
    CHECK(estimate_orders(std::vector<double>{1e-6, 2e-6}, n)[1].kind == ObservedOrder::Kind::Value);
}

TEST_CASE("order estimation rejects bad input") {
    const std::vector<long> n{10, 20};
    CHECK_THROWS_AS((void)estimate_orders(std::vector<double>{1.0, 0.0}, n), Error);
    CHECK_THROWS_AS((void)estimate_orders(std::vector<double>{1.0}, n), Error);
}

TEST_CASE("sweep validation") {
    SweepSpec spec;
    spec.steps = {10, 20};
    CHECK_NOTHROW(spec.validate());
    spec.steps = {20, 10};
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.steps = {};
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.steps = {10};
    spec.problem = "wave";
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.problem = "heat1d";
    spec.method = "rk4";
    CHECK_THROWS_AS(spec.validate(), Error);
    CHECK_THROWS_AS((void)parse_scheme("explicit"), Error);
    CHECK_THROWS_AS((void)parse_format("json"), Error);
    CHECK_THROWS_AS((void)parse_norm("l1"), Error);
    CHECK(parse_norm("max") == ErrorNorm::Max);
}

TEST_CASE("sweeps are deterministic and independent of the worker count") {
    SweepSpec spec;
    spec.problem = "heat1d";
    spec.grid_M = 40;
    spec.method = "gauss3";
    spec.steps = {8, 16, 32, 64};
    const auto a = run_sweep(spec);
    const auto b = run_sweep(spec);
    CHECK(a == b);
    ::setenv("RATSTEP_THREADS", "1", 1);
    CHECK(sweep_threads() == 1);
    const auto c = run_sweep(spec);
    ::unsetenv("RATSTEP_THREADS");
    CHECK(a == c);
    REQUIRE(a.rows.size() == 4);
    for (std::size_t k = 1; k < a.rows.size(); ++k) {
        CHECK(a.rows[k].error < a.rows[k - 1].error);
        CHECK(a.rows[k].tau == doctest::Approx(1.0 / static_cast<double>(spec.steps[k])));
    }
}

TEST_CASE("error norms differ by the grid weight") {
    SweepSpec spec;
    spec.problem = "heat2d";
    spec.grid_M = 10;
    spec.method = "sdirk3";
    spec.steps = {10, 20};
    const auto l2 = run_sweep(spec);
    spec.norm = ErrorNorm::Euclidean;
    const auto euclid = run_sweep(spec);
    spec.norm = ErrorNorm::Max;
    const auto max = run_sweep(spec);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK(euclid.rows[k].error == doctest::Approx(10.0 * l2.rows[k].error).epsilon(1e-12));
        CHECK(max.rows[k].error <= euclid.rows[k].error);
    }
    CHECK(euclid.rows[1].order.value == doctest::Approx(l2.rows[1].order.value).epsilon(1e-10));
}

TEST_CASE("CSV round trip") {
    ConvergenceReport r;
    r.problem = "advection";
    r.method = "sdirk3";
    r.scheme = Scheme::RK;
    r.grid_M = 100;
    r.rows = {{80, 1.0 / 80, 3.0816210295242694e-08, ObservedOrder::none()},
              {160, 1.0 / 160, 2.5733101788365333e-09, ObservedOrder::of(3.5819921828761343)},
              {320, 1.0 / 320, 1e-14, ObservedOrder::floor()}};
    ConvergenceReport s = r;
    s.scheme = Scheme::Rational;
    const std::vector<ConvergenceReport> reports{r, s};
    std::stringstream ss;
    write_csv(ss, reports);
    const auto parsed = parse_csv(ss);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0] == r);
    CHECK(parsed[1] == s);
}

TEST_CASE("CSV from a real sweep round-trips") {
    SweepSpec spec;
    spec.problem = "advection";
    spec.grid_M = 20;
    spec.steps = {10, 20, 40};
    const std::vector<ConvergenceReport> reports{run_sweep(spec)};
    std::stringstream ss;
    write_csv(ss, reports);
    CHECK(parse_csv(ss).front() == reports.front());
}

TEST_CASE("markdown layout") {
    ConvergenceReport r;
    r.problem = "heat1d";
    r.method = "gauss3";
    r.grid_M = 100;
    r.rows = {{10, 0.1, 1e-3, ObservedOrder::none()},
              {20, 0.05, 1e-5, ObservedOrder::of(6.6438)},
              {40, 0.025, 1e-13, ObservedOrder::floor()}};
    ConvergenceReport rk = r;
    rk.scheme = Scheme::RK;
    const std::vector<ConvergenceReport> reports{r, rk};
    std::ostringstream out;
    write_markdown(out, reports, "caption");
    const std::string text = out.str();
    CHECK(text.find("caption") == 0);
    CHECK(text.find("| Method | Version | N = 20 | N = 40 |") != std::string::npos);
    CHECK(text.find("| Gauss3 | Rational | 6.64 | * |") != std::string::npos);
    CHECK(text.find("|  | RK | 6.64 | * |") != std::string::npos);
}

TEST_CASE("table definitions") {
    const auto t1 = table_sweeps("T1");
    REQUIRE(t1.size() == 4);
    CHECK(t1[0].steps == std::vector<long>{10, 20, 40, 80, 160, 320});
    CHECK(t1[0].grid_M == 100);
    CHECK(table_sweeps("T2")[0].steps == std::vector<long>{15, 30, 45, 60, 75, 90});
    CHECK(table_sweeps("T3")[1].steps == std::vector<long>{20, 40, 80, 160, 320, 640});
    const auto t5 = table_sweeps("T5");
    CHECK(t5[0].problem == "advection");
    CHECK(t5[0].norm == ErrorNorm::Max);
    CHECK(t1[0].norm == ErrorNorm::Euclidean);
    CHECK_THROWS_AS((void)table_sweeps("T4"), Error);
}

TEST_CASE("config files and step lists") {
    std::istringstream in("# study\nproblem = heat2d\n grid=40 \nsteps = 10, 20,40\nnorm = max # trailing\n\n");
    const auto cfg = read_config(in);
    CHECK(cfg.at("problem") == "heat2d");
    CHECK(cfg.at("grid") == "40");
    CHECK(cfg.at("norm") == "max");
    CHECK(parse_steps(cfg.at("steps")) == std::vector<long>{10, 20, 40});
    std::istringstream bad("colour = blue\n");
    CHECK_THROWS_AS((void)read_config(bad), Error);
    std::istringstream malformed("problem heat1d\n");
    CHECK_THROWS_AS((void)read_config(malformed), Error);
    CHECK_THROWS_AS((void)parse_steps("10,x"), Error);
    CHECK_THROWS_AS((void)parse_steps("10,20.5"), Error);
}
