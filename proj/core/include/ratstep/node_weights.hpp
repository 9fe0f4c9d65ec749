#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ratstep/rational_function.hpp"

namespace ratstep {

/// Evaluation offsets c_1..c_p: step n samples the source at t_n + tau c_i.
using NodeVector = std::vector<double>;

/// Offsets for step n: [-n, ..., p-1-n] while n < p-1, then [-(p-1), ..., 0].
/// Step 0 shares the grid {0, tau, ..., (p-1) tau} with steps 1..p-1, and from
/// step p on each step needs exactly one new grid value.
[[nodiscard]] NodeVector node_schedule(long n, int p);

/// Which of the p distinct schedules step n uses: min(n, p-1).
[[nodiscard]] inline std::size_t schedule_index(long n, int p) noexcept {
    return static_cast<std::size_t>(n < p - 1 ? n : p - 1);
}

/// Taylor coefficients F_k = binom(j+k-1, k) w^k, k = 0..count-1, of (1 - w z)^(-j).
[[nodiscard]] Eigen::VectorXcd resolvent_taylor(Complex w, int j, int count);

/// Weights gamma with sum_m gamma_m c_m^k = k! F_k for k = 0..p-1, so that
/// sum_m gamma_m v(t + tau c_m) reproduces F(tau d/dt) v for polynomials v of
/// degree < p. Solved by the Bjorck-Pereyra recurrence and verified by residual;
/// throws IllConditionedNodes if the residual exceeds 1e-10 max(1, |k! F|).
[[nodiscard]] Eigen::VectorXcd gamma_weights(const Eigen::VectorXcd& taylor, const NodeVector& nodes);

/// Precomputed gamma_{l,i} for every schedule index, pole group l and power i.
class GammaTable {
public:
    GammaTable() = default;
    GammaTable(const PartialFractionForm& pf, int p);

    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] std::size_t schedule_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t entry_count() const noexcept;

    [[nodiscard]] const NodeVector& nodes(std::size_t schedule) const { return nodes_.at(schedule); }

    /// Weight vector for schedule index, group l (0-based) and power i (1-based).
    [[nodiscard]] const Eigen::VectorXcd& weights(std::size_t schedule, std::size_t group, int power) const {
        return weights_.at(schedule).at(group).at(static_cast<std::size_t>(power - 1));
    }

private:
    int order_ = 0;
    std::vector<NodeVector> nodes_;
    std::vector<std::vector<std::vector<Eigen::VectorXcd>>> weights_;
};

[[nodiscard]] inline GammaTable build_gamma_table(const PartialFractionForm& pf, int p) { return GammaTable(pf, p); }

}  // namespace ratstep
