#include "simcon/objective.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "simcon/errors.hpp"
#include "simcon/integrate.hpp"
#include "simcon/parallel.hpp"

namespace simcon {

namespace {

[[noreturn]] void rethrow_with_index(const SolverError& e, std::size_t nu_index,
                                     const char* where) {
    throw SolverError(std::string(e.what()) + " (" + where + ", parameter index " +
                      std::to_string(nu_index) + ")");
}

} // namespace

ControlProblem::ControlProblem(ParametricSystem s, Vector x0_in, Vector target, double beta_in,
                               TimeGrid g)
    : sys(std::move(s)), x0(std::move(x0_in)), x_target(std::move(target)), beta(beta_in), grid(g) {
    if (!(beta > 0.0))
        throw ValidationError("ControlProblem: beta must be positive");
    if (x0.size() != sys.state_dim() || x_target.size() != sys.state_dim())
        throw ValidationError("ControlProblem: x0/x_target dimension must equal " +
                              std::to_string(sys.state_dim()));
    if (!x0.allFinite() || !x_target.allFinite())
        throw ValidationError("ControlProblem: non-finite initial state or target");
}

Objective::Objective(const ControlProblem& prob, int threads)
    : prob_(&prob), threads_(threads < 1 ? 1 : threads) {}

void Objective::check_signal(const ControlSignal& u) const {
    if (!(u.grid == prob_->grid))
        throw ValidationError("objective: control grid does not match problem grid");
    if (u.components() != prob_->sys.input_dim())
        throw ValidationError("objective: control has " + std::to_string(u.components()) +
                              " components, system input dimension is " +
                              std::to_string(prob_->sys.input_dim()));
}

ControlSignal Objective::zero_control() const {
    return ControlSignal::zero(prob_->grid, prob_->sys.input_dim());
}

FunctionalValue Objective::evaluate(const ControlSignal& u) {
    check_signal(u);
    const auto k = prob_->sys.family_size();
    std::vector<double> mismatch(k);
    parallel_for(k, threads_, [&](std::size_t i) {
        try {
            const Trajectory x = integrate_forward(prob_->sys.dynamics(i), prob_->sys.input_matrix(),
                                                   u, prob_->x0, prob_->grid);
            mismatch[i] = (x.terminal() - prob_->x_target).squaredNorm();
        } catch (const SolverError& e) {
            rethrow_with_index(e, i, "functional evaluation");
        }
    });
    counters_.forward_only += static_cast<long>(k);

    FunctionalValue out;
    for (std::size_t i = 0; i < k; ++i)
        out.terminal_mismatch += prob_->sys.params().weight(i) * mismatch[i];
    out.penalty = 0.5 * prob_->beta * l2_norm_sq(u);
    out.value = 0.5 * out.terminal_mismatch + out.penalty;
    return out;
}

GradientSample Objective::gradient_single(const ControlSignal& u, std::size_t nu_index) {
    check_signal(u);
    if (nu_index >= prob_->sys.family_size())
        throw ValidationError("gradient_single: parameter index " + std::to_string(nu_index) +
                              " out of range");
    const Matrix a = prob_->sys.dynamics(nu_index);
    Trajectory x = [&] {
        try {
            return integrate_forward(a, prob_->sys.input_matrix(), u, prob_->x0, prob_->grid);
        } catch (const SolverError& e) {
            throw SolverError(std::string(e.what()) + " (forward solve, parameter index " +
                              std::to_string(nu_index) + ")");
        }
    }();
    const Vector residual = x.terminal() - prob_->x_target;
    const ControlSignal trace =
        adjoint_input_trace(a, prob_->sys.input_matrix(), Vector(-residual), prob_->grid);
    counters_.coupled += 1;

    ControlSignal control_part(prob_->grid, prob_->beta * u.values);
    ControlSignal combined(prob_->grid, control_part.values - trace.values);
    const double f_est = 0.5 * residual.squaredNorm() + 0.5 * prob_->beta * l2_norm_sq(u);
    return GradientSample{nu_index, std::move(control_part), trace, std::move(combined), f_est};
}

std::pair<ControlSignal, FunctionalValue>
Objective::gradient_full_with_value(const ControlSignal& u) {
    check_signal(u);
    const auto k = prob_->sys.family_size();
    const Matrix bu = prob_->beta * u.values;
    std::vector<Matrix> combined(k);
    std::vector<double> mismatch(k);
    parallel_for(k, threads_, [&](std::size_t i) {
        try {
            const Matrix a = prob_->sys.dynamics(i);
            const Trajectory x =
                integrate_forward(a, prob_->sys.input_matrix(), u, prob_->x0, prob_->grid);
            const Vector residual = x.terminal() - prob_->x_target;
            mismatch[i] = residual.squaredNorm();
            const ControlSignal trace =
                adjoint_input_trace(a, prob_->sys.input_matrix(), Vector(-residual), prob_->grid);
            combined[i] = bu - trace.values;
        } catch (const SolverError& e) {
            rethrow_with_index(e, i, "coupled solve");
        }
    });
    counters_.coupled += static_cast<long>(k);

    Matrix acc = Matrix::Zero(u.values.rows(), u.values.cols());
    FunctionalValue fv;
    for (std::size_t i = 0; i < k; ++i) {
        const double w = prob_->sys.params().weight(i);
        acc += w * combined[i];
        fv.terminal_mismatch += w * mismatch[i];
    }
    fv.penalty = 0.5 * prob_->beta * l2_norm_sq(u);
    fv.value = 0.5 * fv.terminal_mismatch + fv.penalty;
    return {ControlSignal(prob_->grid, std::move(acc)), fv};
}

ControlSignal Objective::gradient_full(const ControlSignal& u) {
    return gradient_full_with_value(u).first;
}

double Objective::gradient_variance(const ControlSignal& u) {
    check_signal(u);
    const auto k = prob_->sys.family_size();
    std::vector<Matrix> combined(k);
    parallel_for(k, threads_, [&](std::size_t i) {
        const Matrix a = prob_->sys.dynamics(i);
        const Trajectory x =
            integrate_forward(a, prob_->sys.input_matrix(), u, prob_->x0, prob_->grid);
        const Vector residual = x.terminal() - prob_->x_target;
        const ControlSignal trace =
            adjoint_input_trace(a, prob_->sys.input_matrix(), Vector(-residual), prob_->grid);
        combined[i] = prob_->beta * u.values - trace.values;
    });
    counters_.coupled += static_cast<long>(k);

    double second_moment = 0.0;
    Matrix mean = Matrix::Zero(u.values.rows(), u.values.cols());
    for (std::size_t i = 0; i < k; ++i) {
        const double w = prob_->sys.params().weight(i);
        second_moment += w * l2_norm_sq(ControlSignal(prob_->grid, combined[i]));
        mean += w * combined[i];
    }
    return second_moment - l2_norm_sq(ControlSignal(prob_->grid, std::move(mean)));
}

ControlSignal Objective::apply_cg_operator(const ControlSignal& u) {
    check_signal(u);
    if (u.is_zero())
        return zero_control(); // A 0 = 0 exactly, no solves needed

    const auto k = prob_->sys.family_size();
    const Matrix bu = prob_->beta * u.values;
    std::vector<Matrix> applied(k);
    const Vector zero_state = Vector::Zero(prob_->sys.state_dim());
    parallel_for(k, threads_, [&](std::size_t i) {
        try {
            const Matrix a = prob_->sys.dynamics(i);
            const Trajectory z =
                integrate_forward(a, prob_->sys.input_matrix(), u, zero_state, prob_->grid);
            const ControlSignal trace =
                adjoint_input_trace(a, prob_->sys.input_matrix(), z.terminal(), prob_->grid);
            applied[i] = bu + trace.values;
        } catch (const SolverError& e) {
            rethrow_with_index(e, i, "operator application");
        }
    });
    counters_.coupled += static_cast<long>(k);

    Matrix acc = Matrix::Zero(u.values.rows(), u.values.cols());
    for (std::size_t i = 0; i < k; ++i)
        acc += prob_->sys.params().weight(i) * applied[i];
    return ControlSignal(prob_->grid, std::move(acc));
}

ControlSignal Objective::cg_rhs() {
    const auto k = prob_->sys.family_size();
    std::vector<Matrix> traces(k);
    parallel_for(k, threads_, [&](std::size_t i) {
        try {
            const Matrix a = prob_->sys.dynamics(i);
            const Trajectory y = integrate_homogeneous(a, prob_->x0, prob_->grid);
            const Vector terminal = -(y.terminal() - prob_->x_target);
            traces[i] =
                adjoint_input_trace(a, prob_->sys.input_matrix(), terminal, prob_->grid).values;
        } catch (const SolverError& e) {
            rethrow_with_index(e, i, "right-hand-side solve");
        }
    });
    counters_.coupled += static_cast<long>(k);

    Matrix acc = Matrix::Zero(prob_->grid.n_nodes(), prob_->sys.input_dim());
    for (std::size_t i = 0; i < k; ++i)
        acc += prob_->sys.params().weight(i) * traces[i];
    return ControlSignal(prob_->grid, std::move(acc));
}

} // namespace simcon
