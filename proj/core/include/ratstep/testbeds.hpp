#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "ratstep/linear_operator.hpp"

namespace ratstep {

using SourceFn = std::function<RealVector(double)>;

/// A semidiscrete problem u_h' = A_h u_h + f_h(t) whose exact solution is a
/// known grid function, so the only error measured is the time-stepping error.
struct ProblemInstance {
    std::string id;
    int grid_M = 0;
    OperatorPtr op;
    /// One row per unknown: x (1D) or (x, y) (2D).
    Eigen::MatrixXd grid;
    RealVector u0;
    SourceFn source;
    SourceFn exact;
    /// Closed-form d/dt of `exact`.
    SourceFn exact_derivative;
    double horizon = 1.0;
    /// Discrete L2 weight: sqrt(h) in 1D, h in 2D.
    double norm_scale = 1.0;

    [[nodiscard]] double norm(const RealVector& v) const { return norm_scale * v.norm(); }
};

/// u_t = -u_x + f on (0,1], u(t,0) = 0, exact u = x e^t; upwind differences.
[[nodiscard]] ProblemInstance make_advection(int M);

/// u_t = u_xx + f, zero Dirichlet, exact u = (1-x) sin(tx) e^{t^2 x}; centered differences.
[[nodiscard]] ProblemInstance make_heat1d(int M);

/// u_t = Laplace(u) + f on the unit square, zero Dirichlet,
/// exact u = x^3 y (x-1) (y-1)^3 e^t; five-point stencil.
[[nodiscard]] ProblemInstance make_heat2d(int M);

/// "advection", "heat1d" or "heat2d"; throws UnknownId otherwise.
[[nodiscard]] ProblemInstance make_problem(const std::string& id, int M);

/// max over t of ||exact'(t) - A exact(t) - source(t)|| / (1 + ||exact(t)||) in the problem norm.
[[nodiscard]] double semidiscrete_residual(const ProblemInstance& problem, double t);

}  // namespace ratstep
