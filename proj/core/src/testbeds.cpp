#include "ratstep/testbeds.hpp"

#include <cmath>

#include "ratstep/error.hpp"

namespace ratstep {

namespace {

// f_h(t) = d/dt exact(t) - A_h exact(t): the grid restriction of u solves the
// semidiscrete system exactly.
void attach_manufactured_source(ProblemInstance& p) {
    auto op = p.op;
    auto exact = p.exact;
    auto derivative = p.exact_derivative;
    p.source = [op, exact, derivative](double t) -> RealVector { return derivative(t) - op->apply(exact(t)); };
    p.u0 = p.exact(0.0);
}

}  // namespace

ProblemInstance make_advection(int M) {
    if (M < 2) throw Error(ErrorCode::InvalidArgument, "advection needs M >= 2");
    ProblemInstance p;
    p.id = "advection";
    p.grid_M = M;
    p.op = make_upwind_1d(M);
    p.grid.resize(M, 1);
    for (int i = 1; i <= M; ++i) p.grid(i - 1, 0) = static_cast<double>(i) / M;
    const RealVector x = p.grid.col(0);
    p.exact = [x](double t) -> RealVector { return x * std::exp(t); };
    p.exact_derivative = p.exact;
    p.norm_scale = std::sqrt(1.0 / M);
    attach_manufactured_source(p);
    return p;
}

ProblemInstance make_heat1d(int M) {
    if (M < 3) throw Error(ErrorCode::InvalidArgument, "heat1d needs M >= 3");
    ProblemInstance p;
    p.id = "heat1d";
    p.grid_M = M;
    p.op = make_heat_1d(M);
    p.grid.resize(M - 1, 1);
    for (int i = 1; i < M; ++i) p.grid(i - 1, 0) = static_cast<double>(i) / M;
    const RealVector x = p.grid.col(0);
    p.exact = [x](double t) -> RealVector {
        return x.unaryExpr([t](double xi) { return (1.0 - xi) * std::sin(t * xi) * std::exp(t * t * xi); });
    };
    p.exact_derivative = [x](double t) -> RealVector {
        return x.unaryExpr([t](double xi) {
            return (1.0 - xi) * std::exp(t * t * xi) * (xi * std::cos(t * xi) + 2.0 * t * xi * std::sin(t * xi));
        });
    };
    p.norm_scale = std::sqrt(1.0 / M);
    attach_manufactured_source(p);
    return p;
}

ProblemInstance make_heat2d(int M) {
    if (M < 3) throw Error(ErrorCode::InvalidArgument, "heat2d needs M >= 3");
    ProblemInstance p;
    p.id = "heat2d";
    p.grid_M = M;
    p.op = make_heat_2d(M);
    const int n = M - 1;
    p.grid.resize(static_cast<Eigen::Index>(n) * n, 2);
    RealVector profile(static_cast<Eigen::Index>(n) * n);
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i <= n; ++i) {
            const Eigen::Index k = static_cast<Eigen::Index>(j - 1) * n + (i - 1);
            const double x = static_cast<double>(i) / M;
            const double y = static_cast<double>(j) / M;
            p.grid(k, 0) = x;
            p.grid(k, 1) = y;
            profile(k) = x * x * x * y * (x - 1.0) * std::pow(y - 1.0, 3);
        }
    }
    p.exact = [profile](double t) -> RealVector { return profile * std::exp(t); };
    p.exact_derivative = p.exact;
    p.norm_scale = 1.0 / M;
    attach_manufactured_source(p);
    return p;
}

ProblemInstance make_problem(const std::string& id, int M) {
    if (id == "advection") return make_advection(M);
    if (id == "heat1d") return make_heat1d(M);
    if (id == "heat2d") return make_heat2d(M);
    throw Error(ErrorCode::UnknownId, "unknown problem '" + id + "'");
}

double semidiscrete_residual(const ProblemInstance& problem, double t) {
    const RealVector u = problem.exact(t);
    const RealVector r = problem.exact_derivative(t) - problem.op->apply(u) - problem.source(t);
    return problem.norm(r) / (1.0 + problem.norm(u));
}

}  // namespace ratstep
