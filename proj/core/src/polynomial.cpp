#include "ratstep/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ratstep/error.hpp"

namespace ratstep::poly {

std::size_t degree(const Polynomial& p) noexcept {
    for (std::size_t k = p.size(); k-- > 0;) {
        if (p[k] != Complex{0.0, 0.0}) return k;
    }
    return 0;
}

Polynomial trimmed(const Polynomial& p) {
    if (p.empty()) return Polynomial{Complex{0.0}};
    return Polynomial(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(degree(p) + 1));
}

Complex evaluate(const Polynomial& p, Complex z) noexcept {
    Complex acc{0.0};
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

Polynomial derivative(const Polynomial& p) {
    if (p.size() <= 1) return Polynomial{Complex{0.0}};
    Polynomial d(p.size() - 1);
    for (std::size_t k = 1; k < p.size(); ++k) d[k - 1] = static_cast<double>(k) * p[k];
    return d;
}

Polynomial add(const Polynomial& a, const Polynomial& b) {
    Polynomial out(std::max(a.size(), b.size()), Complex{0.0});
    for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
    for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
    return out;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
    if (a.empty() || b.empty()) return Polynomial{Complex{0.0}};
    Polynomial out(a.size() + b.size() - 1, Complex{0.0});
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Polynomial scale(const Polynomial& p, Complex factor) {
    Polynomial out(p);
    for (auto& c : out) c *= factor;
    return out;
}

Polynomial deflate(const Polynomial& p, Complex root) {
    const auto t = trimmed(p);
    if (t.size() <= 1) return Polynomial{Complex{0.0}};
    // Synthetic division from the leading coefficient down.
    Polynomial q(t.size() - 1);
    Complex carry{0.0};
    for (std::size_t k = t.size() - 1; k >= 1; --k) {
        carry = carry * root + t[k];
        q[k - 1] = carry;
    }
    return q;
}

Polynomial taylor_shift(const Polynomial& p, Complex center) {
    Polynomial q(p);
    const std::size_t n = q.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t k = n - 1; k > i; --k) q[k - 1] += center * q[k];
    }
    return q;
}

Polynomial series_divide(const Polynomial& num, const Polynomial& den, std::size_t count) {
    if (den.empty() || den[0] == Complex{0.0}) {
        throw Error(ErrorCode::InvalidArgument, "series division by a polynomial vanishing at 0");
    }
    Polynomial out(count, Complex{0.0});
    for (std::size_t k = 0; k < count; ++k) {
        Complex acc = k < num.size() ? num[k] : Complex{0.0};
        const std::size_t upper = std::min(k, den.size() - 1);
        for (std::size_t j = 1; j <= upper; ++j) acc -= den[j] * out[k - j];
        out[k] = acc / den[0];
    }
    return out;
}

std::vector<Complex> roots(const Polynomial& p) {
    const auto t = trimmed(p);
    const std::size_t n = t.size() - 1;
    if (n == 0) return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i < n; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n - 1)) = -t[i] / t[n];
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::RootFindingFailure, "companion eigenvalue iteration did not converge");
    }
    const auto dp = derivative(t);
    std::vector<Complex> out;
    out.reserve(n);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        Complex z = solver.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            const Complex fz = evaluate(t, z);
            const Complex dz = evaluate(dp, z);
            if (dz == Complex{0.0}) break;
            const Complex candidate = z - fz / dz;
            if (std::abs(evaluate(t, candidate)) >= std::abs(fz)) break;
            z = candidate;
        }
        out.push_back(z);
    }
    return out;
}

}  // namespace ratstep::poly
