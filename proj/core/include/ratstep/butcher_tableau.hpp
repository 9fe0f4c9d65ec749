#pragma once

#include <string>

#include <Eigen/Dense>

#include "ratstep/rational_function.hpp"

namespace ratstep {

/// Implicit Runge-Kutta tableau (c | W ; b^T) with its declared orders.
struct ButcherTableau {
    std::string name;
    Eigen::MatrixXd W;
    Eigen::VectorXd b;
    Eigen::VectorXd c;
    int declared_order_p = 0;
    int declared_stage_order_q = 0;

    [[nodiscard]] Eigen::Index stages() const noexcept { return b.size(); }

    /// Row sums equal c and weights sum to one (1e-12).
    [[nodiscard]] bool is_consistent() const noexcept;
};

/// r(z) = det(I - zW + z e b^T) / det(I - zW), expanded in z.
[[nodiscard]] RationalFunction stability_function(const ButcherTableau& t);

/// Largest q with sum_j W_ij c_j^(k-1) = c_i^k / k for all i and k = 1..q (1e-10).
[[nodiscard]] int stage_order(const ButcherTableau& t);

[[nodiscard]] ButcherTableau implicit_euler();

/// 3-stage Gauss-Legendre collocation, p = 6, q = 3.
[[nodiscard]] ButcherTableau gauss3();

/// Crouzeix 3-stage, order-4 A-stable SDIRK with gamma = 1/2 + cos(pi/18)/sqrt(3); q = 1.
[[nodiscard]] ButcherTableau sdirk3();

/// Looks up "implicit_euler", "gauss3" or "sdirk3"; throws UnknownId otherwise.
[[nodiscard]] ButcherTableau builtin_tableau(const std::string& id);

}  // namespace ratstep
