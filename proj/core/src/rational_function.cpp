#include "ratstep/rational_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ratstep/error.hpp"

namespace ratstep {

namespace {

constexpr double kOrderRelTol = 1e-9;
constexpr double kClusterRadius = 5e-3;      // loose grouping of scattered multiple roots
constexpr double kMultiplicityTol = 1e-8;    // D^(k)(center) must vanish to this relative size
constexpr double kReconstructionTol = 1e-8;

// Sum of |c_k| |z|^k: the natural scale against which p(z) is judged to vanish.
double magnitude_scale(const Polynomial& p, double abs_z) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * abs_z + std::abs(*it);
    return acc;
}

struct Cluster {
    Complex center;
    std::size_t multiplicity;
};

std::vector<Cluster> cluster_roots(const Polynomial& den) {
    const auto raw = poly::roots(den);
    const std::size_t n = raw.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double radius = kClusterRadius * std::max(1.0, std::max(std::abs(raw[i]), std::abs(raw[j])));
            if (std::abs(raw[i] - raw[j]) < radius) parent[find(i)] = find(j);
        }
    }

    std::vector<Cluster> clusters;
    std::vector<std::size_t> owner(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (owner[root] == n) {
            owner[root] = clusters.size();
            clusters.push_back({Complex{0.0}, 0});
        }
        auto& c = clusters[owner[root]];
        c.center += raw[i];
        ++c.multiplicity;
    }

    for (auto& c : clusters) {
        c.center /= static_cast<double>(c.multiplicity);
        if (c.multiplicity == 1) continue;

        // Polish on D^(m-1), which has a simple root at an m-fold root of D.
        std::vector<Polynomial> derivs{den};
        for (std::size_t k = 0; k < c.multiplicity; ++k) derivs.push_back(poly::derivative(derivs.back()));
        const auto& target = derivs[c.multiplicity - 1];
        const auto& slope = derivs[c.multiplicity];
        for (int it = 0; it < 4; ++it) {
            const Complex d = poly::evaluate(slope, c.center);
            if (d == Complex{0.0}) break;
            c.center -= poly::evaluate(target, c.center) / d;
        }
        for (std::size_t k = 0; k < c.multiplicity; ++k) {
            const double scale = magnitude_scale(derivs[k], std::abs(c.center));
            if (std::abs(poly::evaluate(derivs[k], c.center)) > kMultiplicityTol * scale) {
                throw Error(ErrorCode::RootFindingFailure,
                            "near-confluent denominator roots that are not a verified multiple root");
            }
        }
    }
    return clusters;
}

}  // namespace

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator)
    : numerator_(poly::trimmed(numerator)), denominator_(poly::trimmed(denominator)) {
    if (denominator_[0] == Complex{0.0}) {
        throw Error(ErrorCode::InvalidRationalFunction, "denominator vanishes at z = 0");
    }
    if (numerator_degree() > denominator_degree()) {
        throw Error(ErrorCode::InvalidRationalFunction,
                    "numerator degree exceeds denominator degree (unbounded at infinity)");
    }
}

Complex RationalFunction::value_at_infinity() const noexcept {
    if (numerator_degree() < denominator_degree()) return Complex{0.0};
    return numerator_.back() / denominator_.back();
}

Complex RationalFunction::operator()(Complex z) const {
    const double abs_z = std::abs(z);
    const double den_scale = magnitude_scale(denominator_, abs_z);
    if (abs_z <= 1.0) {
        const Complex d = poly::evaluate(denominator_, z);
        if (std::abs(d) <= 1e-14 * den_scale) throw Error(ErrorCode::EvaluationAtPole, "denominator vanishes");
        return poly::evaluate(numerator_, z) / d;
    }
    // Outside the unit disk evaluate reversed polynomials in 1/z.
    const Complex inv = 1.0 / z;
    Complex num{0.0};
    for (const auto& c : numerator_) num = num * inv + c;
    Complex den{0.0};
    for (const auto& c : denominator_) den = den * inv + c;
    if (std::abs(den) <= 1e-14 * magnitude_scale(denominator_, 1.0 / abs_z)) {
        throw Error(ErrorCode::EvaluationAtPole, "denominator vanishes");
    }
    const auto gap = static_cast<int>(denominator_degree() - numerator_degree());
    return num / den * std::pow(inv, gap);
}

Polynomial RationalFunction::taylor_coefficients(std::size_t count) const {
    return poly::series_divide(numerator_, denominator_, count);
}

std::size_t PartialFractionForm::total_stages() const noexcept {
    std::size_t s = 0;
    for (const auto& g : groups) s += g.multiplicity();
    return s;
}

Complex PartialFractionForm::operator()(Complex z) const {
    Complex acc = r_inf;
    for (const auto& g : groups) {
        const Complex base = 1.0 / (1.0 - z * g.w);
        Complex power = base;
        for (const auto& c : g.coeffs) {
            acc += c * power;
            power *= base;
        }
    }
    return acc;
}

int approximation_order(const RationalFunction& r, int cap) {
    const auto taylor = r.taylor_coefficients(static_cast<std::size_t>(cap) + 2);
    double factorial = 1.0;
    int matched = -1;
    for (std::size_t k = 0; k < taylor.size(); ++k) {
        if (k > 0) factorial *= static_cast<double>(k);
        const double expected = 1.0 / factorial;
        if (std::abs(taylor[k] - expected) > kOrderRelTol * expected) break;
        matched = static_cast<int>(k);
    }
    if (matched < 0) throw Error(ErrorCode::InvalidArgument, "r(0) != 1; not an approximation to e^z");
    if (matched > cap) {
        throw Error(ErrorCode::OrderExceedsCap,
                    "Taylor coefficients match e^z beyond order " + std::to_string(cap));
    }
    return matched;
}

PartialFractionForm partial_fractions(const RationalFunction& r) {
    PartialFractionForm pf;
    pf.r_inf = r.value_at_infinity();
    pf.order_p = approximation_order(r);

    const auto& den = r.denominator();
    const auto clusters = cluster_roots(den);

    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const Complex z0 = clusters[c].center;
        const std::size_t m = clusters[c].multiplicity;
        const Complex w = 1.0 / z0;
        if (!(w.real() > 0.0)) {
            throw Error(ErrorCode::PoleInRightHalfClosure, "pole with Re(w) <= 0");
        }

        // Q(z) = D(z) / (z - z0)^m assembled from the remaining poles.
        Polynomial q{den.back()};
        for (std::size_t o = 0; o < clusters.size(); ++o) {
            if (o == c) continue;
            for (std::size_t k = 0; k < clusters[o].multiplicity; ++k) {
                q = poly::multiply(q, Polynomial{-clusters[o].center, Complex{1.0}});
            }
        }
        const auto laurent = poly::series_divide(poly::taylor_shift(r.numerator(), z0), poly::taylor_shift(q, z0), m);

        PoleGroup group{w, std::vector<Complex>(m)};
        Complex minus_w_pow{1.0};
        for (std::size_t j = 1; j <= m; ++j) {
            minus_w_pow *= -w;
            group.coeffs[j - 1] = laurent[m - j] * minus_w_pow;
        }
        pf.groups.push_back(std::move(group));
    }

    // Self-check of the decomposition on rings around the origin.
    for (double radius : {0.3, 1.0, 3.0, 10.0}) {
        for (int k = 0; k < 16; ++k) {
            const double angle = 2.0 * std::numbers::pi * (k + 0.5) / 16.0;
            const Complex z = std::polar(radius, angle);
            bool near_pole = false;
            for (const auto& g : pf.groups) near_pole = near_pole || std::abs(z - 1.0 / g.w) < 1e-3;
            if (near_pole) continue;
            const Complex exact = r(z);
            if (std::abs(pf(z) - exact) > kReconstructionTol * (1.0 + std::abs(exact))) {
                throw Error(ErrorCode::RootFindingFailure, "simple-fraction reconstruction residual too large");
            }
        }
    }
    return pf;
}

double tau_threshold(const PartialFractionForm& pf, double omega) noexcept {
    if (omega <= 0.0) return std::numeric_limits<double>::infinity();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& g : pf.groups) best = std::min(best, (1.0 / g.w).real() / omega);
    return best;
}

bool is_a_stable(const RationalFunction& r, double tol) {
    for (const auto& z : poly::roots(r.denominator())) {
        if (z.real() <= 0.0) return false;
    }
    if (std::abs(r.value_at_infinity()) > 1.0 + tol) return false;
    constexpr int kSamples = 20001;
    for (int k = 1; k < kSamples; ++k) {
        const double theta = std::numbers::pi * (static_cast<double>(k) / kSamples - 0.5);
        if (std::abs(r(Complex{0.0, std::tan(theta)})) > 1.0 + tol) return false;
    }
    return true;
}

}  // namespace ratstep
