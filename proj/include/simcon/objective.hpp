#pragma once

#include <cstddef>
#include <utility>

#include "simcon/system.hpp"

namespace simcon {

/// Simultaneous-control problem: steer every realization from x0 toward
/// x_target at the grid horizon, with control penalty beta.
struct ControlProblem {
    ParametricSystem sys;
    Vector x0;
    Vector x_target;
    double beta;
    TimeGrid grid;

    ControlProblem(ParametricSystem s, Vector x0_in, Vector target, double beta_in, TimeGrid g);
};

struct FunctionalValue {
    double value = 0.0;             // 1/2 E||x(T)-xT||^2 + beta/2 ||u||^2
    double terminal_mismatch = 0.0; // E||x(T)-xT||^2
    double penalty = 0.0;           // beta/2 ||u||^2
};

/// Gradient of a single realization: combined = beta*u - adjoint_part,
/// nodewise, where adjoint_part is the control-space trace of the adjoint
/// solve with terminal datum -(x_nu(T) - xT).
struct GradientSample {
    std::size_t nu_index;
    ControlSignal control_part; // beta * u
    ControlSignal adjoint_part;
    ControlSignal combined;
    double f_estimate = 0.0; // single-sample functional value at u
};

struct SolveCounters {
    long coupled = 0;      // forward+adjoint pairs
    long forward_only = 0; // plain functional evaluations
};

/// Functional, adjoint gradients, and the operator form A u = b for one
/// problem. The per-parameter solves are independent and may run on
/// `threads` workers; every expectation is reduced in ascending parameter
/// order regardless of thread count, so results are bitwise reproducible.
class Objective {
public:
    explicit Objective(const ControlProblem& prob, int threads = 1);

    [[nodiscard]] FunctionalValue evaluate(const ControlSignal& u);

    /// mu-weighted sum of the single-parameter gradients, fixed order.
    [[nodiscard]] ControlSignal gradient_full(const ControlSignal& u);

    /// Gradient plus the functional value from the same forward solves.
    [[nodiscard]] std::pair<ControlSignal, FunctionalValue>
    gradient_full_with_value(const ControlSignal& u);

    /// One forward + one adjoint solve for the chosen parameter only.
    [[nodiscard]] GradientSample gradient_single(const ControlSignal& u, std::size_t nu_index);

    /// E||g_nu||^2 - ||E g_nu||^2 in the discrete L2 norm.
    [[nodiscard]] double gradient_variance(const ControlSignal& u);

    /// A u = beta u + E[L* L u]; symmetric positive definite in the
    /// trapezoidal inner product. An identically-zero u short-circuits to
    /// the zero signal without consuming solves.
    [[nodiscard]] ControlSignal apply_cg_operator(const ControlSignal& u);

    /// b = E[L*(-(y_nu(T) - xT))] with y the homogeneous solution from x0.
    [[nodiscard]] ControlSignal cg_rhs();

    [[nodiscard]] const ControlProblem& problem() const { return *prob_; }
    [[nodiscard]] const SolveCounters& counters() const { return counters_; }
    [[nodiscard]] ControlSignal zero_control() const;

private:
    void check_signal(const ControlSignal& u) const;

    const ControlProblem* prob_;
    int threads_;
    SolveCounters counters_;
};

} // namespace simcon
