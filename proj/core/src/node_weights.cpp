#include "ratstep/node_weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ratstep/error.hpp"

namespace ratstep {

NodeVector node_schedule(long n, int p) {
    if (n < 0 || p < 1) throw Error(ErrorCode::InvalidArgument, "node_schedule needs n >= 0 and p >= 1");
    const long shift = std::min<long>(n, p - 1);
    NodeVector c(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) c[static_cast<std::size_t>(i)] = static_cast<double>(i - shift);
    return c;
}

Eigen::VectorXcd resolvent_taylor(Complex w, int j, int count) {
    if (j < 1) throw Error(ErrorCode::InvalidArgument, "resolvent power must be >= 1");
    Eigen::VectorXcd F(count);
    double binom = 1.0;  // binom(j+k-1, k)
    Complex wk{1.0};
    for (int k = 0; k < count; ++k) {
        if (k > 0) {
            binom *= static_cast<double>(j + k - 1) / k;
            wk *= w;
        }
        F(k) = binom * wk;
    }
    return F;
}

Eigen::VectorXcd gamma_weights(const Eigen::VectorXcd& taylor, const NodeVector& nodes) {
    const auto p = static_cast<Eigen::Index>(nodes.size());
    if (taylor.size() != p) throw Error(ErrorCode::DimensionMismatch, "need one Taylor coefficient per node");
    for (Eigen::Index a = 0; a < p; ++a) {
        for (Eigen::Index b = a + 1; b < p; ++b) {
            if (nodes[static_cast<std::size_t>(a)] == nodes[static_cast<std::size_t>(b)]) {
                throw Error(ErrorCode::InvalidArgument, "nodes must be pairwise distinct");
            }
        }
    }

    // Right-hand side k! F_k.
    Eigen::VectorXcd rhs(p);
    double factorial = 1.0;
    for (Eigen::Index k = 0; k < p; ++k) {
        if (k > 0) factorial *= static_cast<double>(k);
        rhs(k) = factorial * taylor(k);
    }

    // Bjorck-Pereyra for the primal system V g = rhs with V(k, m) = c_m^k.
    const auto& x = nodes;
    Eigen::VectorXcd g = rhs;
    const Eigen::Index n = p - 1;
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index i = n; i > k; --i) g(i) -= x[static_cast<std::size_t>(k)] * g(i - 1);
    }
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        for (Eigen::Index i = k + 1; i <= n; ++i) {
            g(i) /= (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - k - 1)]);
        }
        for (Eigen::Index i = k; i < n; ++i) g(i) -= g(i + 1);
    }

    // Verify every moment equation.
    double residual = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
        Complex acc{0.0};
        for (Eigen::Index m = 0; m < p; ++m) acc += std::pow(x[static_cast<std::size_t>(m)], static_cast<int>(k)) * g(m);
        residual = std::max(residual, std::abs(acc - rhs(k)));
    }
    if (residual > 1e-10 * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::IllConditionedNodes, "Vandermonde residual " + std::to_string(residual));
    }
    return g;
}

GammaTable::GammaTable(const PartialFractionForm& pf, int p) : order_(p) {
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "gamma table needs p >= 1");
    for (long n = 0; n < p; ++n) {
        nodes_.push_back(node_schedule(n, p));
        std::vector<std::vector<Eigen::VectorXcd>> per_group;
        for (const auto& group : pf.groups) {
            std::vector<Eigen::VectorXcd> per_power;
            for (int i = 1; i <= static_cast<int>(group.multiplicity()); ++i) {
                per_power.push_back(gamma_weights(resolvent_taylor(group.w, i, p), nodes_.back()));
            }
            per_group.push_back(std::move(per_power));
        }
        weights_.push_back(std::move(per_group));
    }
}

std::size_t GammaTable::entry_count() const noexcept {
    std::size_t count = 0;
    for (const auto& s : weights_) {
        for (const auto& g : s) count += g.size();
    }
    return count;
}

}  // namespace ratstep
