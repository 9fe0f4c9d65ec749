#include "ratstep/butcher_tableau.hpp"

#include <cmath>
#include <numbers>

#include "ratstep/error.hpp"

namespace ratstep {

namespace {

using PolyMatrix = std::vector<std::vector<Polynomial>>;

// Cofactor expansion along the first row; entries are polynomials in z.
Polynomial cofactor_determinant(const PolyMatrix& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Polynomial det{Complex{0.0}};
    for (std::size_t col = 0; col < n; ++col) {
        PolyMatrix minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Polynomial> row;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != col) row.push_back(m[r][k]);
            }
            minor.push_back(std::move(row));
        }
        const double sign = (col % 2 == 0) ? 1.0 : -1.0;
        det = poly::add(det, poly::scale(poly::multiply(m[0][col], cofactor_determinant(minor)), sign));
    }
    return det;
}

// det(I - zM): the reversed characteristic polynomial of M from Faddeev-LeVerrier.
Polynomial faddeev_leverrier(const Eigen::MatrixXd& M) {
    const Eigen::Index n = M.rows();
    // char poly det(lambda I - M) = sum_k a_k lambda^k with a_n = 1.
    std::vector<double> a(static_cast<std::size_t>(n) + 1, 0.0);
    a[static_cast<std::size_t>(n)] = 1.0;
    Eigen::MatrixXd Mk = Eigen::MatrixXd::Zero(n, n);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        Mk = M * Mk + a[static_cast<std::size_t>(n - k + 1)] * I;
        a[static_cast<std::size_t>(n - k)] = -(M * Mk).trace() / static_cast<double>(k);
    }
    // det(I - zM) = z^n det(I/z - M) = sum_k a_k z^(n-k).
    Polynomial out(static_cast<std::size_t>(n) + 1);
    for (Eigen::Index k = 0; k <= n; ++k) out[static_cast<std::size_t>(n - k)] = a[static_cast<std::size_t>(k)];
    return out;
}

Polynomial det_identity_minus_z(const Eigen::MatrixXd& M) {
    const auto n = static_cast<std::size_t>(M.rows());
    if (n > 3) return faddeev_leverrier(M);
    PolyMatrix pm(n, std::vector<Polynomial>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double delta = (i == j) ? 1.0 : 0.0;
            pm[i][j] = Polynomial{delta, -M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))};
        }
    }
    return cofactor_determinant(pm);
}

}  // namespace

bool ButcherTableau::is_consistent() const noexcept {
    if (W.rows() != W.cols() || W.rows() != b.size() || b.size() != c.size()) return false;
    if (std::abs(b.sum() - 1.0) > 1e-12) return false;
    return ((W.rowwise().sum() - c).cwiseAbs().maxCoeff() <= 1e-12);
}

RationalFunction stability_function(const ButcherTableau& t) {
    const Eigen::Index s = t.stages();
    const Eigen::MatrixXd shifted = t.W - Eigen::VectorXd::Ones(s) * t.b.transpose();
    return RationalFunction(det_identity_minus_z(shifted), det_identity_minus_z(t.W));
}

int stage_order(const ButcherTableau& t) {
    const Eigen::Index s = t.stages();
    int q = 0;
    for (int k = 1; k <= 2 * static_cast<int>(s) + 2; ++k) {
        const Eigen::VectorXd lhs = t.W * t.c.array().pow(k - 1).matrix();
        const Eigen::VectorXd rhs = t.c.array().pow(k) / static_cast<double>(k);
        if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10) break;
        q = k;
    }
    return q;
}

ButcherTableau implicit_euler() {
    ButcherTableau t;
    t.name = "implicit_euler";
    t.W = Eigen::MatrixXd::Constant(1, 1, 1.0);
    t.b = Eigen::VectorXd::Constant(1, 1.0);
    t.c = Eigen::VectorXd::Constant(1, 1.0);
    t.declared_order_p = 1;
    t.declared_stage_order_q = 1;
    return t;
}

ButcherTableau gauss3() {
    const double r15 = std::sqrt(15.0);
    ButcherTableau t;
    t.name = "gauss3";
    t.W.resize(3, 3);
    t.W << 5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0,
           5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0,
           5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0;
    t.b.resize(3);
    t.b << 5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0;
    t.c.resize(3);
    t.c << 0.5 - r15 / 10.0, 0.5, 0.5 + r15 / 10.0;
    t.declared_order_p = 6;
    t.declared_stage_order_q = 3;
    return t;
}

ButcherTableau sdirk3() {
    const double g = 0.5 + std::cos(std::numbers::pi / 18.0) / std::sqrt(3.0);
    const double delta = 1.0 / (6.0 * (2.0 * g - 1.0) * (2.0 * g - 1.0));
    ButcherTableau t;
    t.name = "sdirk3";
    t.W.resize(3, 3);
    t.W << g, 0.0, 0.0,
           0.5 - g, g, 0.0,
           2.0 * g, 1.0 - 4.0 * g, g;
    t.b.resize(3);
    t.b << delta, 1.0 - 2.0 * delta, delta;
    t.c.resize(3);
    t.c << g, 0.5, 1.0 - g;
    t.declared_order_p = 4;
    t.declared_stage_order_q = 1;
    return t;
}

ButcherTableau builtin_tableau(const std::string& id) {
    if (id == "implicit_euler") return implicit_euler();
    if (id == "gauss3") return gauss3();
    if (id == "sdirk3") return sdirk3();
    throw Error(ErrorCode::UnknownId, "unknown method '" + id + "'");
}

}  // namespace ratstep
