#pragma once

#include <cstddef>
#include <vector>

#include "ratstep/polynomial.hpp"

namespace ratstep {

/// Rational approximation r(z) = numerator(z) / denominator(z) to e^z.
///
/// Construction enforces that r is analytic at the origin (nonzero constant
/// term in the denominator) and bounded at infinity (deg numerator <= deg
/// denominator). Values are immutable after construction.
class RationalFunction {
public:
    RationalFunction(Polynomial numerator, Polynomial denominator);

    [[nodiscard]] const Polynomial& numerator() const noexcept { return numerator_; }
    [[nodiscard]] const Polynomial& denominator() const noexcept { return denominator_; }

    [[nodiscard]] std::size_t numerator_degree() const noexcept { return numerator_.size() - 1; }
    [[nodiscard]] std::size_t denominator_degree() const noexcept { return denominator_.size() - 1; }

    /// lim_{z -> inf} r(z).
    [[nodiscard]] Complex value_at_infinity() const noexcept;

    /// Throws EvaluationAtPole when the denominator vanishes (relative to its size) at z.
    [[nodiscard]] Complex operator()(Complex z) const;

    /// First `count` Taylor coefficients at 0, by power-series division.
    [[nodiscard]] Polynomial taylor_coefficients(std::size_t count) const;

private:
    Polynomial numerator_;
    Polynomial denominator_;
};

[[nodiscard]] inline Complex evaluate(const RationalFunction& r, Complex z) { return r(z); }

/// One pole group of r(z) = r_inf + sum_l sum_j coeffs[j-1] / (1 - z w)^j.
struct PoleGroup {
    Complex w;                    ///< pole sits at z = 1/w, Re(w) > 0
    std::vector<Complex> coeffs;  ///< r_{l,1..m}; multiplicity m = coeffs.size()

    [[nodiscard]] std::size_t multiplicity() const noexcept { return coeffs.size(); }
};

/// Executable simple-fraction form of r(tau A): r_inf I + sum r_lj (I - tau w_l A)^{-j}.
struct PartialFractionForm {
    Complex r_inf{0.0};
    std::vector<PoleGroup> groups;
    int order_p = 0;

    /// s = sum of multiplicities = number of shifted solves per application.
    [[nodiscard]] std::size_t total_stages() const noexcept;

    /// Evaluates the simple-fraction sum directly (used to check reconstruction).
    [[nodiscard]] Complex operator()(Complex z) const;
};

/// Default cap on detected approximation order.
inline constexpr int kDefaultOrderCap = 12;

/// Largest p with Taylor coefficients of r equal to 1/k! for k = 0..p
/// (relative tolerance 1e-9). Throws OrderExceedsCap when coefficients still
/// match at k = cap + 1.
[[nodiscard]] int approximation_order(const RationalFunction& r, int cap = kDefaultOrderCap);

/// Splits r into simple fractions. Poles come from companion-matrix
/// eigenvalues; clustered roots are promoted to multiple poles only when the
/// derivatives of the denominator confirm the multiplicity. The result is
/// checked against r on sample points and rejected above 1e-8 relative.
[[nodiscard]] PartialFractionForm partial_fractions(const RationalFunction& r);

/// Largest admissible step: +inf for omega <= 0, else min_l Re(1/w_l) / omega.
[[nodiscard]] double tau_threshold(const PartialFractionForm& pf, double omega) noexcept;

/// Numerical A-stability check: no pole in Re z <= 0 and |r(iy)| <= 1 + tol
/// on a dense sampling of the imaginary axis (including y = +-inf).
[[nodiscard]] bool is_a_stable(const RationalFunction& r, double tol = 1e-10);

}  // namespace ratstep
