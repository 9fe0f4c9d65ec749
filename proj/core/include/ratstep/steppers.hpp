#pragma once

#include <map>
#include <memory>
#include <span>
#include <vector>

#include "ratstep/butcher_tableau.hpp"
#include "ratstep/linear_operator.hpp"
#include "ratstep/node_weights.hpp"
#include "ratstep/rational_function.hpp"
#include "ratstep/testbeds.hpp"

namespace ratstep {

/// x_i = (I - tau w A)^{-1} (x_{i-1} + tau w g_i), i = 1..k, starting from x_0 = u.
///
/// With g_i = L (I - tau w B)^{-i} v this is the first component of
/// (I - tau w G)^{-i} (u, v) for the extended generator G = [[A, L], [0, B]].
/// Returns x_1..x_k.
[[nodiscard]] std::vector<ComplexVector> resolvent_chain(const ShiftedSolveOperator& op, Complex w, double tau,
                                                         const ComplexVector& u,
                                                         std::span<const ComplexVector> g);

struct RationalOptions {
    /// For real data, process one pole of each conjugate pair and double its real part.
    bool conjugate_pairs = true;
};

/// Rational method for u' = A u + f(t) at the full order p of r:
///
///   u_{n+1} = r(tau A) u_n + tau E_n(tau) f(t_n + tau c_n),
///
/// realized with s = sum m_l shifted solves per step through resolvent_chain.
/// Source values are cached by integer grid index k (time k tau), since every
/// node schedule lands on the uniform grid.
class RationalStepper {
public:
    RationalStepper(std::shared_ptr<const ShiftedSolveOperator> op, PartialFractionForm pf, GammaTable gamma,
                    double tau, const RealVector& u0, RationalOptions options = {});

    void step(const SourceFn& f);

    [[nodiscard]] const ComplexVector& state() const noexcept { return u_; }
    [[nodiscard]] long step_index() const noexcept { return n_; }
    [[nodiscard]] double tau() const noexcept { return tau_; }

    /// Total distinct source evaluations so far (grid indices 0..highest_index()).
    [[nodiscard]] std::size_t evaluations() const noexcept { return evaluations_; }
    [[nodiscard]] long highest_index() const noexcept { return highest_index_; }
    /// Shifted solves issued by this stepper (s per step, fewer with conjugate pairing).
    [[nodiscard]] std::size_t solves() const noexcept { return solves_; }
    /// Largest ||Im u_{n+1}|| / ||u_{n+1}|| discarded so far.
    [[nodiscard]] double max_imaginary_residue() const noexcept { return max_imaginary_residue_; }

    [[nodiscard]] const PartialFractionForm& partial_fractions() const noexcept { return pf_; }
    [[nodiscard]] const GammaTable& gamma() const noexcept { return gamma_; }

private:
    const RealVector& source_at(long index, const SourceFn& f);

    std::shared_ptr<const ShiftedSolveOperator> op_;
    PartialFractionForm pf_;
    GammaTable gamma_;
    double tau_;
    RationalOptions options_;
    ComplexVector u_;
    long n_ = 0;
    std::map<long, RealVector> window_;  // values still reachable by upcoming schedules
    std::size_t evaluations_ = 0;
    std::size_t solves_ = 0;
    long highest_index_ = -1;
    double max_imaginary_residue_ = 0.0;
    std::vector<bool> skip_group_;
    std::vector<bool> doubled_group_;
};

struct IntegrationResult {
    RealVector final_state;
    /// Real parts after each step (only when requested).
    std::vector<RealVector> history;
    std::size_t solves = 0;
    std::size_t evaluations = 0;
    /// Largest per-step ||Im u_{n+1}|| / ||u_{n+1}|| before the real part is taken.
    double imaginary_residue = 0.0;
};

struct IntegrateOptions {
    RationalOptions rational{};
    bool keep_history = false;
};

/// N rational steps of size T/N from u0. Throws ImaginaryResidueTooLarge if any
/// step produced ||Im u_{n+1}|| > 1e-10 ||u_{n+1}||.
[[nodiscard]] IntegrationResult rational_integrate(std::shared_ptr<const ShiftedSolveOperator> op,
                                                   const SourceFn& f, const RealVector& u0, double T, long N,
                                                   const PartialFractionForm& pf, const GammaTable& gamma,
                                                   IntegrateOptions options = {});

[[nodiscard]] IntegrationResult rational_integrate(const ProblemInstance& problem, long N,
                                                   const PartialFractionForm& pf, const GammaTable& gamma,
                                                   IntegrateOptions options = {});

/// Classical implicit RK on u' = A u + f. Lower-triangular W is solved stage by
/// stage; otherwise W is diagonalized over C and each step does one shifted
/// solve per eigenvalue.
[[nodiscard]] IntegrationResult rk_integrate(std::shared_ptr<const ShiftedSolveOperator> op, const SourceFn& f,
                                             const RealVector& u0, double T, long N, const ButcherTableau& tableau,
                                             bool keep_history = false);

[[nodiscard]] IntegrationResult rk_integrate(const ProblemInstance& problem, long N, const ButcherTableau& tableau,
                                             bool keep_history = false);

}  // namespace ratstep
