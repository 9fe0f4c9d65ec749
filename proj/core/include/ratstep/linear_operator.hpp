#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string_view>
#include <tuple>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "ratstep/polynomial.hpp"

namespace ratstep {

using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

enum class OperatorStructure { Dense, LowerBidiagonal, Tridiagonal, FivePoint2D };

std::string_view to_string(OperatorStructure s) noexcept;

/// A real linear operator A (a generator, typically a semidiscrete PDE
/// operator) that can be applied and inverted in the shifted form
/// (I - tau w A) x = y for complex w.
///
/// Factorizations of I - tau w A are cached per (w, tau). The cache is
/// guarded by a reader/writer lock, so concurrent sweeps may share one
/// operator; every rational or RK step reuses the same few shifts.
class ShiftedSolveOperator {
public:
    ShiftedSolveOperator(Eigen::Index dimension, OperatorStructure structure, double omega);
    virtual ~ShiftedSolveOperator();

    ShiftedSolveOperator(const ShiftedSolveOperator&) = delete;
    ShiftedSolveOperator& operator=(const ShiftedSolveOperator&) = delete;

    [[nodiscard]] Eigen::Index dimension() const noexcept { return dimension_; }
    [[nodiscard]] OperatorStructure structure() const noexcept { return structure_; }
    /// Growth-bound metadata (||exp(tA)|| <= M e^{omega t}); only feeds the step threshold.
    [[nodiscard]] double omega() const noexcept { return omega_; }

    [[nodiscard]] RealVector apply(const RealVector& v) const;
    [[nodiscard]] ComplexVector apply(const ComplexVector& v) const;

    /// Solves (I - tau w A) x = rhs, fetching or creating the cached factorization.
    [[nodiscard]] ComplexVector solve_shifted(Complex w, double tau, const ComplexVector& rhs) const;

    [[nodiscard]] Eigen::MatrixXd to_dense() const;

    void set_caching(bool enabled) noexcept { caching_.store(enabled); }
    [[nodiscard]] bool caching() const noexcept { return caching_.load(); }
    void clear_cache();
    [[nodiscard]] std::size_t cached_factorizations() const;

    /// Instrumentation: shifted solves and factorizations performed so far.
    [[nodiscard]] std::size_t solve_count() const noexcept { return solves_.load(); }
    [[nodiscard]] std::size_t factorization_count() const noexcept { return factorizations_.load(); }
    void reset_counters() noexcept;

protected:
    class Factorization {
    public:
        virtual ~Factorization() = default;
        [[nodiscard]] virtual ComplexVector solve(const ComplexVector& rhs) const = 0;
    };

    virtual void apply_real(const RealVector& v, RealVector& out) const = 0;
    virtual void apply_complex(const ComplexVector& v, ComplexVector& out) const = 0;
    /// Factorizes I - shift * A.
    [[nodiscard]] virtual std::unique_ptr<Factorization> factorize(Complex shift) const = 0;

private:
    using Key = std::tuple<double, double, double>;

    [[nodiscard]] std::shared_ptr<const Factorization> factorization_for(Complex w, double tau) const;

    Eigen::Index dimension_;
    OperatorStructure structure_;
    double omega_;
    std::atomic<bool> caching_{true};
    mutable std::shared_mutex cache_mutex_;
    mutable std::map<Key, std::shared_ptr<const Factorization>> cache_;
    mutable std::atomic<std::size_t> solves_{0};
    mutable std::atomic<std::size_t> factorizations_{0};
};

using OperatorPtr = std::shared_ptr<ShiftedSolveOperator>;

/// Dense matrix backend (O(n^2) apply, partial-pivot LU per shift).
[[nodiscard]] OperatorPtr make_dense(Eigen::MatrixXd matrix, double omega = 0.0);

/// Banded backends from explicit bands. `sub` has length n-1 (entry k is A(k+1, k)),
/// `super` has length n-1 (entry k is A(k, k+1)).
[[nodiscard]] OperatorPtr make_lower_bidiagonal(RealVector diag, RealVector sub, double omega = 0.0);
[[nodiscard]] OperatorPtr make_tridiagonal(RealVector sub, RealVector diag, RealVector super, double omega = 0.0);

/// First-order upwind for -d/dx on x_i = i/M, i = 1..M, with inflow value 0 at x = 0.
[[nodiscard]] OperatorPtr make_upwind_1d(int M);

/// Centered (1, -2, 1)/h^2 on the interior nodes x_i = i/M, i = 1..M-1, zero Dirichlet.
[[nodiscard]] OperatorPtr make_heat_1d(int M);

/// Five-point Laplacian /h^2 on the (M-1)^2 interior nodes of the unit square,
/// zero Dirichlet, row-major with x fastest: k = (j-1)(M-1) + (i-1) for (x_i, y_j).
[[nodiscard]] OperatorPtr make_heat_2d(int M);

}  // namespace ratstep
