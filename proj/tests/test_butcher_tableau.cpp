#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ratstep/butcher_tableau.hpp"
#include "ratstep/error.hpp"
#include "ratstep/polynomial.hpp"

using namespace ratstep;

TEST_CASE("builtin tableaus are consistent and hit their declared orders") {
    for (const auto& t : {implicit_euler(), gauss3(), sdirk3()}) {
        CAPTURE(t.name);
        CHECK(t.is_consistent());
        CHECK(approximation_order(stability_function(t)) == t.declared_order_p);
        CHECK(stage_order(t) == t.declared_stage_order_q);
        CHECK(stage_order(t) <= t.declared_order_p);
    }
    CHECK(implicit_euler().declared_order_p == 1);
    CHECK(gauss3().declared_order_p == 6);
    CHECK(sdirk3().declared_order_p == 4);
    CHECK(stage_order(gauss3()) == 3);
    CHECK(stage_order(sdirk3()) == 1);
    CHECK(stage_order(implicit_euler()) == 1);
}

TEST_CASE("implicit Euler stability function is 1/(1-z)") {
    const auto r = stability_function(implicit_euler());
    REQUIRE(r.numerator_degree() == 0);
    REQUIRE(r.denominator_degree() == 1);
    const Complex scale = r.denominator()[0];
    CHECK(std::abs(r.numerator()[0] / scale - 1.0) < 1e-15);
    CHECK(std::abs(r.denominator()[1] / scale + 1.0) < 1e-15);
}

TEST_CASE("Gauss3 abscissae are the shifted Legendre roots") {
    const auto t = gauss3();
    const double d = std::sqrt(15.0) / 10.0;
    CHECK(t.c(0) == doctest::Approx(0.5 - d).epsilon(1e-15));
    CHECK(t.c(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.c(2) == doctest::Approx(0.5 + d).epsilon(1e-15));
    const auto r = stability_function(t);
    CHECK(r.denominator_degree() == 3);
    CHECK(r.numerator_degree() == 3);
}

TEST_CASE("SDIRK3 denominator is (1 - gamma z)^3") {
    const auto t = sdirk3();
    const double g = 0.5 + std::cos(std::numbers::pi / 18.0) / std::sqrt(3.0);
    CHECK(t.W(0, 0) == doctest::Approx(g).epsilon(1e-15));
    const auto r = stability_function(t);
    const Polynomial expected{1.0, -3.0 * g, 3.0 * g * g, -g * g * g};
    REQUIRE(r.denominator().size() == expected.size());
    const Complex scale = r.denominator()[0];
    for (std::size_t k = 0; k < expected.size(); ++k) {
        CHECK(std::abs(r.denominator()[k] / scale - expected[k]) < 1e-13);
    }
}

TEST_CASE("stability function matches 1 + z b^T (I - zW)^{-1} e") {
    for (const auto& t : {implicit_euler(), gauss3(), sdirk3()}) {
        const auto r = stability_function(t);
        const Eigen::Index s = t.stages();
        for (Complex z : {Complex{-0.3, 0.2}, Complex{-4.0, 7.0}, Complex{0.1, -0.05}, Complex{-100.0, 0.0}}) {
            const Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(s, s) - z * t.W.cast<Complex>();
            const Eigen::VectorXcd x = M.partialPivLu().solve(Eigen::VectorXcd::Ones(s));
            const Complex direct = 1.0 + z * (t.b.cast<Complex>().transpose() * x)(0);
            CHECK(std::abs(r(z) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
        }
    }
}

TEST_CASE("determinant route for more than three stages") {
    // Four-stage diagonal tableau: det(I - zW) = prod (1 - z W_ii).
    ButcherTableau t;
    t.name = "diag4";
    t.W = Eigen::MatrixXd::Zero(4, 4);
    t.W.diagonal() << 1.0, 0.5, 0.25, 2.0;
    t.b = Eigen::VectorXd::Constant(4, 0.25);
    t.c = t.W.diagonal();
    const auto r = stability_function(t);
    for (Complex z : {Complex{-1.0, 0.5}, Complex{0.2, 0.0}, Complex{-3.0, -2.0}}) {
        Complex direct = 1.0;
        for (int i = 0; i < 4; ++i) direct += z * 0.25 / (1.0 - z * t.W(i, i));
        CHECK(std::abs(r(z) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("tableau lookup") {
    CHECK(builtin_tableau("gauss3").name == gauss3().name);
    CHECK(builtin_tableau("sdirk3").stages() == 3);
    CHECK(builtin_tableau("implicit_euler").stages() == 1);
    try {
        (void)builtin_tableau("rk4");
        FAIL("expected UnknownId");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownId);
    }
}
