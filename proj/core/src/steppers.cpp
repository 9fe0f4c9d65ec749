#include "ratstep/steppers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ratstep/error.hpp"

namespace ratstep {

std::vector<ComplexVector> resolvent_chain(const ShiftedSolveOperator& op, Complex w, double tau,
                                           const ComplexVector& u, std::span<const ComplexVector> g) {
    std::vector<ComplexVector> xs;
    xs.reserve(g.size());
    const Complex scale = tau * w;
    const ComplexVector* previous = &u;
    for (const auto& gi : g) {
        xs.push_back(op.solve_shifted(w, tau, *previous + scale * gi));
        previous = &xs.back();
    }
    return xs;
}

RationalStepper::RationalStepper(std::shared_ptr<const ShiftedSolveOperator> op, PartialFractionForm pf,
                                 GammaTable gamma, double tau, const RealVector& u0, RationalOptions options)
    : op_(std::move(op)), pf_(std::move(pf)), gamma_(std::move(gamma)), tau_(tau), options_(options) {
    if (!(tau_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "step size must be positive");
    if (!(tau_ < tau_threshold(pf_, op_->omega()))) {
        throw Error(ErrorCode::StepSizeAboveThreshold, "tau = " + std::to_string(tau_) + " is not below tau_0");
    }
    if (u0.size() != op_->dimension()) throw Error(ErrorCode::DimensionMismatch, "initial value size");
    if (gamma_.order() < 1 || gamma_.schedule_count() == 0) {
        throw Error(ErrorCode::InvalidArgument, "gamma table is empty");
    }
    u_ = u0.cast<Complex>();

    const std::size_t k = pf_.groups.size();
    skip_group_.assign(k, false);
    doubled_group_.assign(k, false);
    if (options_.conjugate_pairs) {
        for (std::size_t a = 0; a < k; ++a) {
            const Complex wa = pf_.groups[a].w;
            if (skip_group_[a] || std::abs(wa.imag()) <= 1e-12 * std::abs(wa) || wa.imag() < 0.0) continue;
            for (std::size_t b = 0; b < k; ++b) {
                if (b == a || skip_group_[b] || doubled_group_[b]) continue;
                const Complex wb = pf_.groups[b].w;
                if (std::abs(wb - std::conj(wa)) <= 1e-12 * std::abs(wa) &&
                    pf_.groups[b].multiplicity() == pf_.groups[a].multiplicity()) {
                    doubled_group_[a] = true;
                    skip_group_[b] = true;
                    break;
                }
            }
        }
    }
}

const RealVector& RationalStepper::source_at(long index, const SourceFn& f) {
    auto it = window_.find(index);
    if (it != window_.end()) return it->second;
    if (index <= highest_index_) {
        throw Error(ErrorCode::InvalidArgument, "source index " + std::to_string(index) + " already evicted");
    }
    RealVector value = f(static_cast<double>(index) * tau_);
    if (value.size() != op_->dimension()) throw Error(ErrorCode::DimensionMismatch, "source value size");
    ++evaluations_;
    highest_index_ = std::max(highest_index_, index);
    return window_.emplace(index, std::move(value)).first->second;
}

void RationalStepper::step(const SourceFn& f) {
    const int p = gamma_.order();
    const std::size_t schedule = schedule_index(n_, p);
    const NodeVector& nodes = gamma_.nodes(schedule);

    std::vector<const RealVector*> values;
    values.reserve(nodes.size());
    for (double c : nodes) values.push_back(&source_at(n_ + static_cast<long>(c), f));

    ComplexVector next = pf_.r_inf * u_;
    std::vector<ComplexVector> g;
    for (std::size_t l = 0; l < pf_.groups.size(); ++l) {
        if (skip_group_[l]) continue;
        const auto& group = pf_.groups[l];
        const int m = static_cast<int>(group.multiplicity());

        g.assign(static_cast<std::size_t>(m), ComplexVector::Zero(op_->dimension()));
        for (int i = 1; i <= m; ++i) {
            const Eigen::VectorXcd& gamma = gamma_.weights(schedule, l, i);
            auto& gi = g[static_cast<std::size_t>(i - 1)];
            for (std::size_t q = 0; q < values.size(); ++q) gi += gamma(static_cast<Eigen::Index>(q)) * values[q]->cast<Complex>();
        }

        const auto xs = resolvent_chain(*op_, group.w, tau_, u_, g);
        solves_ += xs.size();
        ComplexVector contribution = ComplexVector::Zero(op_->dimension());
        for (int j = 1; j <= m; ++j) contribution += group.coeffs[static_cast<std::size_t>(j - 1)] * xs[static_cast<std::size_t>(j - 1)];

        if (doubled_group_[l]) {
            next += (2.0 * contribution.real()).cast<Complex>();
        } else {
            next += contribution;
        }
    }
    // Real data: the update is real up to roundoff.
    const double total = next.norm();
    const double imag = next.imag().norm();
    max_imaginary_residue_ = std::max(max_imaginary_residue_, total > 0.0 ? imag / total : imag);
    u_ = next.real().cast<Complex>();
    ++n_;

    // Keep only indices that later schedules can still reach.
    const long lowest_needed = n_ - std::min<long>(n_, p - 1);
    while (!window_.empty() && window_.begin()->first < lowest_needed) window_.erase(window_.begin());
}

IntegrationResult rational_integrate(std::shared_ptr<const ShiftedSolveOperator> op, const SourceFn& f,
                                     const RealVector& u0, double T, long N, const PartialFractionForm& pf,
                                     const GammaTable& gamma, IntegrateOptions options) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "need at least one step");
    RationalStepper stepper(op, pf, gamma, T / static_cast<double>(N), u0, options.rational);
    IntegrationResult result;
    for (long n = 0; n < N; ++n) {
        stepper.step(f);
        if (options.keep_history) result.history.push_back(stepper.state().real());
    }
    const ComplexVector& u = stepper.state();
    result.imaginary_residue = stepper.max_imaginary_residue();
    if (result.imaginary_residue > 1e-10) {
        throw Error(ErrorCode::ImaginaryResidueTooLarge,
                    "imaginary residue " + std::to_string(result.imaginary_residue) + " for real data");
    }
    result.final_state = u.real();
    result.solves = stepper.solves();
    result.evaluations = stepper.evaluations();
    return result;
}

IntegrationResult rational_integrate(const ProblemInstance& problem, long N, const PartialFractionForm& pf,
                                     const GammaTable& gamma, IntegrateOptions options) {
    return rational_integrate(problem.op, problem.source, problem.u0, problem.horizon, N, pf, gamma, options);
}

namespace {

bool is_lower_triangular(const Eigen::MatrixXd& W) {
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < W.cols(); ++j) {
            if (W(i, j) != 0.0) return false;
        }
    }
    return true;
}

}  // namespace

IntegrationResult rk_integrate(std::shared_ptr<const ShiftedSolveOperator> op, const SourceFn& f,
                               const RealVector& u0, double T, long N, const ButcherTableau& tableau,
                               bool keep_history) {
    if (N < 1) throw Error(ErrorCode::InvalidArgument, "need at least one step");
    if (u0.size() != op->dimension()) throw Error(ErrorCode::DimensionMismatch, "initial value size");
    const double tau = T / static_cast<double>(N);
    const Eigen::Index s = tableau.stages();
    const Eigen::Index dim = op->dimension();
    IntegrationResult result;
    RealVector u = u0;
    std::vector<ComplexVector> K(static_cast<std::size_t>(s));

    const bool sequential = is_lower_triangular(tableau.W);
    Eigen::MatrixXcd T_mat;
    Eigen::MatrixXcd T_inv;
    Eigen::VectorXcd lambda;
    if (!sequential) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(tableau.W.cast<Complex>());
        if (eig.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "tableau matrix not diagonalizable");
        T_mat = eig.eigenvectors();
        T_inv = T_mat.inverse();
        lambda = eig.eigenvalues();
    }

    for (long n = 0; n < N; ++n) {
        const double t = static_cast<double>(n) * tau;
        std::vector<RealVector> fi(static_cast<std::size_t>(s));
        for (Eigen::Index i = 0; i < s; ++i) {
            fi[static_cast<std::size_t>(i)] = f(t + tableau.c(i) * tau);
            ++result.evaluations;
        }

        if (sequential) {
            for (Eigen::Index i = 0; i < s; ++i) {
                ComplexVector stage = u.cast<Complex>();
                for (Eigen::Index j = 0; j < i; ++j) stage += (tau * tableau.W(i, j)) * K[static_cast<std::size_t>(j)];
                ComplexVector rhs = op->apply(stage) + fi[static_cast<std::size_t>(i)].cast<Complex>();
                K[static_cast<std::size_t>(i)] = op->solve_shifted(Complex{tableau.W(i, i)}, tau, rhs);
                ++result.solves;
            }
        } else {
            const ComplexVector Au = op->apply(RealVector(u)).cast<Complex>();
            std::vector<ComplexVector> transformed(static_cast<std::size_t>(s), ComplexVector::Zero(dim));
            for (Eigen::Index i = 0; i < s; ++i) {
                for (Eigen::Index j = 0; j < s; ++j) {
                    transformed[static_cast<std::size_t>(i)] +=
                        T_inv(i, j) * (Au + fi[static_cast<std::size_t>(j)].cast<Complex>());
                }
                transformed[static_cast<std::size_t>(i)] =
                    op->solve_shifted(lambda(i), tau, transformed[static_cast<std::size_t>(i)]);
                ++result.solves;
            }
            for (Eigen::Index i = 0; i < s; ++i) {
                K[static_cast<std::size_t>(i)] = ComplexVector::Zero(dim);
                for (Eigen::Index j = 0; j < s; ++j) {
                    K[static_cast<std::size_t>(i)] += T_mat(i, j) * transformed[static_cast<std::size_t>(j)];
                }
            }
        }

        ComplexVector increment = ComplexVector::Zero(dim);
        for (Eigen::Index i = 0; i < s; ++i) increment += tableau.b(i) * K[static_cast<std::size_t>(i)];
        u += tau * increment.real();
        if (keep_history) result.history.push_back(u);
    }
    result.final_state = u;
    return result;
}

IntegrationResult rk_integrate(const ProblemInstance& problem, long N, const ButcherTableau& tableau,
                               bool keep_history) {
    return rk_integrate(problem.op, problem.source, problem.u0, problem.horizon, N, tableau, keep_history);
}

}  // namespace ratstep
