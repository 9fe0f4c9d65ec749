#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "ratstep/error.hpp"
#include "ratstep/linear_operator.hpp"

using namespace ratstep;

namespace {

ComplexVector random_complex(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    ComplexVector v(n);
    for (auto& x : v) x = Complex{normal(rng), normal(rng)};
    return v;
}

RealVector random_real(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    RealVector v(n);
    for (auto& x : v) x = normal(rng);
    return v;
}

double shifted_residual(const ShiftedSolveOperator& op, Complex w, double tau, const ComplexVector& rhs) {
    const ComplexVector x = op.solve_shifted(w, tau, rhs);
    return (x - tau * w * op.apply(x) - rhs).norm() / rhs.norm();
}

}  // namespace

TEST_CASE("dense apply and shifted solve on a scalar") {
    const auto op = make_dense(Eigen::MatrixXd::Constant(1, 1, -1.0));
    CHECK(op->apply(RealVector(RealVector::Constant(1, 2.0)))(0) == doctest::Approx(-2.0));
    const ComplexVector x = op->solve_shifted(1.0, 0.5, ComplexVector::Ones(1));
    CHECK(std::abs(x(0) - 2.0 / 3.0) < 1e-15);
    CHECK_THROWS_AS((void)op->apply(RealVector(RealVector::Zero(2))), Error);
    CHECK_THROWS_AS((void)op->solve_shifted(1.0, 0.5, ComplexVector::Ones(3)), Error);
}

TEST_CASE("stencil matrices for the smallest grids") {
    Eigen::MatrixXd upwind(2, 2);
    upwind << -2.0, 0.0, 2.0, -2.0;
    CHECK((make_upwind_1d(2)->to_dense() - upwind).norm() == 0.0);
    CHECK(make_heat_1d(2)->to_dense()(0, 0) == doctest::Approx(-8.0));
    CHECK(make_heat_2d(2)->to_dense()(0, 0) == doctest::Approx(-16.0));
    CHECK(make_heat_1d(2)->dimension() == 1);
    CHECK(make_heat_2d(5)->dimension() == 16);
    CHECK(make_upwind_1d(7)->dimension() == 7);
}

TEST_CASE("discrete sine mode is an eigenvector of the 1D Laplacian") {
    const int M = 5;
    const double h = 1.0 / M;
    const auto op = make_heat_1d(M);
    RealVector mode(M - 1);
    for (int i = 1; i < M; ++i) mode(i - 1) = std::sin(std::numbers::pi * i * h);
    const double lambda = -(2.0 / (h * h)) * (1.0 - std::cos(std::numbers::pi * h));
    CHECK((op->apply(mode) - lambda * mode).norm() < 1e-12 * std::abs(lambda));
}

TEST_CASE("upwind on a constant vector") {
    const int M = 10;
    const auto op = make_upwind_1d(M);
    const RealVector out = op->apply(RealVector(RealVector::Constant(M, 3.0)));
    CHECK(out(0) == doctest::Approx(-3.0 * M));
    for (int i = 1; i < M; ++i) CHECK(std::abs(out(i)) < 1e-12);
}

TEST_CASE("2D ordering runs x fastest") {
    const int M = 4;
    const auto op = make_heat_2d(M);
    const Eigen::MatrixXd A = op->to_dense();
    const int n = M - 1;
    // Node (i, j) = (1, 1) couples to (2, 1) at index 1 and to (1, 2) at index n.
    CHECK(A(0, 1) == doctest::Approx(M * M));
    CHECK(A(0, n) == doctest::Approx(M * M));
    // Last node of the first row has no right neighbour inside the domain.
    CHECK(A(n - 1, n) == 0.0);
}

TEST_CASE("apply is linear") {
    std::mt19937_64 rng(3);
    for (const auto& op : {make_upwind_1d(30), make_heat_1d(30), make_heat_2d(9)}) {
        const RealVector x = random_real(op->dimension(), rng);
        const RealVector y = random_real(op->dimension(), rng);
        const RealVector lhs = op->apply(RealVector(2.5 * x - 0.75 * y));
        const RealVector rhs = 2.5 * op->apply(x) - 0.75 * op->apply(y);
        CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
        const ComplexVector z = x.cast<Complex>() + Complex{0.0, 1.0} * y.cast<Complex>();
        const ComplexVector az = op->apply(z);
        CHECK((az.real() - op->apply(x)).norm() <= 1e-12 * (1.0 + az.norm()));
        CHECK((az.imag() - op->apply(y)).norm() <= 1e-12 * (1.0 + az.norm()));
    }
}

TEST_CASE("builtin operators are dissipative") {
    std::mt19937_64 rng(11);
    for (const auto& op : {make_upwind_1d(40), make_heat_1d(40), make_heat_2d(12)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const RealVector v = random_real(op->dimension(), rng);
            CHECK(op->apply(v).dot(v) <= 1e-12 * v.squaredNorm());
        }
        CHECK(op->omega() == 0.0);
    }
}

TEST_CASE("shifted solves leave small residuals") {
    std::mt19937_64 rng(5);
    for (const auto& op : {make_upwind_1d(50), make_heat_1d(50), make_heat_2d(15)}) {
        CAPTURE(to_string(op->structure()));
        for (Complex w : {Complex{1.0}, Complex{1.0, 1.0}, Complex{0.14, -0.13}, Complex{1.07}}) {
            const ComplexVector rhs = random_complex(op->dimension(), rng);
            CHECK(shifted_residual(*op, w, 0.01, rhs) <= 1e-10);
            CHECK(shifted_residual(*op, w, 0.5, rhs) <= 1e-10);
        }
    }
}

TEST_CASE("complex Thomas solve matches a dense oracle") {
    std::mt19937_64 rng(19);
    for (int n : {1, 2, 5, 20, 50}) {
        const RealVector sub = random_real(n - 1, rng);
        const RealVector super = random_real(n - 1, rng);
        RealVector diag = random_real(n, rng).array().abs() * -1.0 - 3.0;
        const auto tri = make_tridiagonal(sub, diag, super);
        const auto dense = make_dense(tri->to_dense());
        for (Complex w : {Complex{1.0}, Complex{0.3, 0.7}}) {
            const ComplexVector rhs = random_complex(n, rng);
            const ComplexVector a = tri->solve_shifted(w, 0.2, rhs);
            const ComplexVector b = dense->solve_shifted(w, 0.2, rhs);
            CHECK((a - b).norm() <= 1e-11 * b.norm());
        }
    }
}

TEST_CASE("bidiagonal solve matches a dense oracle") {
    std::mt19937_64 rng(23);
    const RealVector diag = -(random_real(20, rng).array().abs() + 1.0);
    const RealVector sub = random_real(19, rng);
    const auto bi = make_lower_bidiagonal(diag, sub);
    const auto dense = make_dense(bi->to_dense());
    const ComplexVector rhs = random_complex(20, rng);
    const ComplexVector a = bi->solve_shifted(Complex{0.5, 0.5}, 0.3, rhs);
    const ComplexVector b = dense->solve_shifted(Complex{0.5, 0.5}, 0.3, rhs);
    CHECK((a - b).norm() <= 1e-12 * b.norm());
}

TEST_CASE("five-point solve with a complex shift") {
    std::mt19937_64 rng(29);
    const auto op = make_heat_2d(20);
    const ComplexVector rhs = random_complex(op->dimension(), rng);
    CHECK(shifted_residual(*op, Complex{1.0, 1.0}, 0.05, rhs) <= 1e-10);
}

TEST_CASE("factorization cache reuses shifts and is transparent") {
    std::mt19937_64 rng(31);
    const auto op = make_heat_1d(30);
    const ComplexVector rhs = random_complex(op->dimension(), rng);
    op->reset_counters();
    const ComplexVector first = op->solve_shifted(Complex{0.3, 0.2}, 0.1, rhs);
    const ComplexVector second = op->solve_shifted(Complex{0.3, 0.2}, 0.1, rhs);
    CHECK(op->factorization_count() == 1);
    CHECK(op->solve_count() == 2);
    CHECK(op->cached_factorizations() == 1);
    CHECK((first - second).norm() == 0.0);
    (void)op->solve_shifted(Complex{0.3, 0.2}, 0.2, rhs);
    CHECK(op->cached_factorizations() == 2);

    op->set_caching(false);
    op->clear_cache();
    const ComplexVector uncached = op->solve_shifted(Complex{0.3, 0.2}, 0.1, rhs);
    CHECK(op->cached_factorizations() == 0);
    CHECK((uncached - first).norm() <= 1e-13 * first.norm());
}

TEST_CASE("concurrent solves share one operator") {
    const auto op = make_heat_2d(12);
    std::vector<ComplexVector> results(8);
    {
        std::vector<std::jthread> workers;
        for (std::size_t k = 0; k < results.size(); ++k) {
            workers.emplace_back([&, k] {
                const double tau = 0.01 * static_cast<double>(1 + k % 3);
                results[k] = op->solve_shifted(Complex{1.0, 0.5}, tau, ComplexVector::Ones(op->dimension()));
            });
        }
    }
    CHECK(op->cached_factorizations() == 3);
    for (std::size_t k = 0; k < results.size(); ++k) {
        const double tau = 0.01 * static_cast<double>(1 + k % 3);
        const ComplexVector expected = op->solve_shifted(Complex{1.0, 0.5}, tau, ComplexVector::Ones(op->dimension()));
        CHECK((results[k] - expected).norm() == 0.0);
    }
}
