#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace ratstep {

using Complex = std::complex<double>;

/// Complex polynomial stored with ascending coefficients: p[k] multiplies z^k.
using Polynomial = std::vector<Complex>;

namespace poly {

/// Index of the highest exactly-nonzero coefficient (0 for the zero polynomial).
std::size_t degree(const Polynomial& p) noexcept;

/// Copy without trailing exact zeros; never returns an empty vector.
Polynomial trimmed(const Polynomial& p);

Complex evaluate(const Polynomial& p, Complex z) noexcept;

Polynomial derivative(const Polynomial& p);
Polynomial add(const Polynomial& a, const Polynomial& b);
Polynomial multiply(const Polynomial& a, const Polynomial& b);
Polynomial scale(const Polynomial& p, Complex factor);

/// Quotient of p(z) / (z - root); the remainder p(root) is dropped.
Polynomial deflate(const Polynomial& p, Complex root);

/// Coefficients of q(h) = p(center + h).
Polynomial taylor_shift(const Polynomial& p, Complex center);

/// First `count` Taylor coefficients at 0 of num/den. Requires den[0] != 0.
Polynomial series_divide(const Polynomial& num, const Polynomial& den, std::size_t count);

/// All roots (with repetition) as eigenvalues of the companion matrix, each
/// polished by a few guarded Newton steps. Multiple roots come back scattered.
std::vector<Complex> roots(const Polynomial& p);

}  // namespace poly
}  // namespace ratstep
