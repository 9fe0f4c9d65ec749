#include "ratstep/diagnostics.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "ratstep/butcher_tableau.hpp"
#include "ratstep/error.hpp"
#include "ratstep/node_weights.hpp"
#include "ratstep/steppers.hpp"
#include "ratstep/testbeds.hpp"

namespace ratstep {

namespace {

std::vector<ButcherTableau> builtins() { return {implicit_euler(), gauss3(), sdirk3()}; }

std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult check(std::string name, const std::function<std::string()>& body) {
    try {
        std::string failure = body();
        return {std::move(name), failure.empty(), failure.empty() ? "ok" : failure};
    } catch (const std::exception& e) {
        return {std::move(name), false, e.what()};
    }
}

Eigen::MatrixXd random_dissipative(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Eigen::MatrixXd B(n, n);
    Eigen::MatrixXd S(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            B(i, j) = normal(rng);
            S(i, j) = normal(rng);
        }
    }
    return -(B * B.transpose()) - Eigen::MatrixXd::Identity(n, n) + (S - S.transpose());
}

}  // namespace

std::vector<CheckResult> run_self_checks() {
    std::vector<CheckResult> results;
    std::mt19937_64 rng(20240917);

    results.push_back(check("rational_functions: reconstruction and consistency sums", [&] {
        std::uniform_real_distribution<double> radius(0.0, 10.0);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        for (const auto& t : builtins()) {
            const auto r = stability_function(t);
            const auto pf = partial_fractions(r);
            Complex sum = pf.r_inf;
            Complex slope{0.0};
            for (const auto& g : pf.groups) {
                for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
                    sum += g.coeffs[j];
                    slope += static_cast<double>(j + 1) * g.coeffs[j] * g.w;
                }
            }
            if (std::abs(sum - 1.0) > 1e-12 || std::abs(slope - 1.0) > 1e-12) {
                return t.name + ": consistency sums off by " + sci(std::abs(sum - 1.0)) + ", " + sci(std::abs(slope - 1.0));
            }
            for (int k = 0; k < 100; ++k) {
                const Complex z = std::polar(radius(rng), angle(rng));
                bool near = false;
                for (const auto& g : pf.groups) near = near || std::abs(1.0 - z * g.w) < 1e-6;
                if (near) continue;
                const Complex exact = r(z);
                if (std::abs(pf(z) - exact) > 1e-10 * (1.0 + std::abs(exact))) return t.name + ": reconstruction mismatch";
            }
        }
        return std::string{};
    }));

    results.push_back(check("butcher_tableaus: declared orders", [&] {
        for (const auto& t : builtins()) {
            if (!t.is_consistent()) return t.name + ": inconsistent tableau";
            const auto r = stability_function(t);
            if (approximation_order(r) != t.declared_order_p) return t.name + ": order mismatch";
            if (stage_order(t) != t.declared_stage_order_q) return t.name + ": stage order mismatch";
            if (!is_a_stable(r)) return t.name + ": not A-stable";
        }
        return std::string{};
    }));

    results.push_back(check("linear_operators: dissipativity and solve residuals", [&] {
        std::normal_distribution<double> normal;
        for (const auto& op : {make_upwind_1d(40), make_heat_1d(40), make_heat_2d(12)}) {
            RealVector v(op->dimension());
            for (auto& x : v) x = normal(rng);
            if (v.dot(op->apply(v)) > 1e-12 * v.squaredNorm()) return std::string(to_string(op->structure())) + ": not dissipative";
            ComplexVector rhs(op->dimension());
            for (auto& x : rhs) x = Complex{normal(rng), normal(rng)};
            const Complex w{1.0, 1.0};
            const ComplexVector x = op->solve_shifted(w, 0.01, rhs);
            const double res = (x - 0.01 * w * op->apply(x) - rhs).norm() / rhs.norm();
            if (res > 1e-10) return std::string(to_string(op->structure())) + ": residual " + sci(res);
        }
        return std::string{};
    }));

    results.push_back(check("node_weights: moment identity", [&] {
        for (const auto& t : builtins()) {
            const auto pf = partial_fractions(stability_function(t));
            const GammaTable table(pf, pf.order_p);
            for (std::size_t s = 0; s < table.schedule_count(); ++s) {
                for (std::size_t l = 0; l < pf.groups.size(); ++l) {
                    for (int i = 1; i <= static_cast<int>(pf.groups[l].multiplicity()); ++i) {
                        const auto F = resolvent_taylor(pf.groups[l].w, i, pf.order_p);
                        const auto& g = table.weights(s, l, i);
                        double fact = 1.0;
                        for (int k = 0; k < pf.order_p; ++k) {
                            if (k > 0) fact *= k;
                            Complex acc{0.0};
                            for (int m = 0; m < pf.order_p; ++m) acc += g(m) * std::pow(table.nodes(s)[static_cast<std::size_t>(m)], k);
                            if (std::abs(acc - fact * F(k)) > 1e-9 * std::max(1.0, std::abs(fact * F(k)))) {
                                return t.name + ": moment identity violated";
                            }
                        }
                    }
                }
            }
        }
        return std::string{};
    }));

    results.push_back(check("steppers: homogeneous equivalence with RK", [&] {
        const auto A = make_dense(random_dissipative(10, rng));
        RealVector u0(10);
        std::normal_distribution<double> normal;
        for (auto& x : u0) x = normal(rng);
        const SourceFn zero = [](double) { return RealVector::Zero(10); };
        for (const auto& t : builtins()) {
            const auto pf = partial_fractions(stability_function(t));
            const GammaTable table(pf, pf.order_p);
            const auto rat = rational_integrate(A, zero, u0, 1.0, 20, pf, table).final_state;
            const auto rk = rk_integrate(A, zero, u0, 1.0, 20, t).final_state;
            const double rel = (rat - rk).norm() / rk.norm();
            if (rel > 1e-12) return t.name + ": relative gap " + sci(rel);
        }
        return std::string{};
    }));

    results.push_back(check("steppers: cost accounting", [&] {
        for (const auto& t : builtins()) {
            const auto pf = partial_fractions(stability_function(t));
            const GammaTable table(pf, pf.order_p);
            const auto A = make_heat_1d(20);
            IntegrateOptions opts;
            opts.rational.conjugate_pairs = false;
            const SourceFn f = [](double tt) { return RealVector::Constant(19, std::cos(tt)); };
            const auto res = rational_integrate(A, f, RealVector::Zero(19), 1.0, 50, pf, table, opts);
            if (res.solves != 50 * pf.total_stages()) return t.name + ": solve count " + std::to_string(res.solves);
            if (res.evaluations != 50) return t.name + ": evaluation count " + std::to_string(res.evaluations);
        }
        return std::string{};
    }));

    results.push_back(check("steppers: polynomial exactness", [&] {
        for (const auto& t : builtins()) {
            const auto pf = partial_fractions(stability_function(t));
            const GammaTable table(pf, pf.order_p);
            const int p = pf.order_p;
            const auto zero_op = make_dense(Eigen::MatrixXd::Zero(2, 2));
            // f(t) = sum_k t^k / (k+1) in both components, so u(1) = u0 + sum_k 1/(k+1)^2.
            const SourceFn f = [p](double tt) {
                double v = 0.0;
                for (int k = 0; k < p; ++k) v += std::pow(tt, k) / (k + 1);
                return RealVector::Constant(2, v);
            };
            double exact = 1.0;
            for (int k = 0; k < p; ++k) exact += 1.0 / ((k + 1.0) * (k + 1.0));
            const auto res = rational_integrate(zero_op, f, RealVector::Ones(2), 1.0, 100, pf, table);
            const double rel = std::abs(res.final_state(0) - exact) / exact;
            if (rel > 1e-9) return t.name + ": relative error " + sci(rel);
        }
        return std::string{};
    }));

    results.push_back(check("testbed_problems: semidiscrete residual", [&] {
        for (const auto& id : {"advection", "heat1d", "heat2d"}) {
            const auto problem = make_problem(id, 20);
            for (double t : {0.0, 0.3, 0.7, 1.0}) {
                if (semidiscrete_residual(problem, t) > 1e-8) return std::string(id) + ": residual too large";
            }
            if ((problem.exact(0.0) - problem.u0).norm() != 0.0) return std::string(id) + ": exact(0) != u0";
        }
        return std::string{};
    }));

    return results;
}

}  // namespace ratstep
