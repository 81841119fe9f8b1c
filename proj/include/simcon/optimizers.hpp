#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "simcon/objective.hpp"

namespace simcon {

enum class Algorithm { GD, CG, SGD, CSG };

[[nodiscard]] const char* algorithm_name(Algorithm a);
[[nodiscard]] std::optional<Algorithm> algorithm_from_name(std::string_view name);

/// Step-size schedule. Constant admits eta == 0 (frozen-control
/// diagnostic); all other parameters must be positive, shrink in (0,1).
struct LearningRate {
    enum class Kind { Constant, RobbinsMonro, Adaptive };

    Kind kind = Kind::Constant;
    double eta = 0.0;                        // Constant
    double rm_a = 0.0, rm_b = 0.0;           // RobbinsMonro: eta_k = a/(b+k)
    double eta0 = 0.0, shrink = 0.5;         // Adaptive
    int stall_window = 10;

    static LearningRate constant(double eta);
    static LearningRate robbins_monro(double a, double b);
    static LearningRate adaptive(double eta0, double shrink = 0.5, int stall_window = 10);
};

/// Stop criterion: GradNormSq stops when the squared norm of the exact
/// gradient (or CG residual) drops below tol; UpdateWindow stops when the
/// mean squared update over the last `window` iterations drops below tol.
struct StopRule {
    enum class Kind { GradNormSq, UpdateWindow };

    Kind kind = Kind::GradNormSq;
    double tol = 1e-4;
    int max_iter = 1;
    int window = 10;

    static StopRule grad_norm_sq(double tol, int max_iter);
    static StopRule update_window(double tol, int max_iter, int window = 10);
};

enum class HistoryKind { Exact, Estimate, None };

struct RunReport {
    Algorithm algorithm = Algorithm::GD;
    int iterations = 0;
    bool converged = false;

    // Cost accounting. coupled_solves counts the forward+adjoint pairs the
    // iteration itself consumed: iterations*K for GD, (iterations+1)*K for
    // CG started from the zero control, iterations for SGD/CSG. The
    // power-iteration step-size calibration and the report-time functional
    // evaluations are kept in their own columns.
    long coupled_solves = 0;
    long rate_setup_solves = 0;
    long report_forward_solves = 0;

    std::optional<std::uint64_t> seed;
    double learning_rate_used = 0.0;
    HistoryKind history_kind = HistoryKind::None;
    std::vector<double> functional_history; // F (GD) or single-sample estimate (SGD/CSG)
    std::vector<double> measure_history;    // ||g||^2, ||r||^2, or ||du||^2 per iteration
    std::vector<long> solves_history;       // cumulative coupled solves per iteration
    std::vector<int> sampled_indices;       // SGD/CSG draw history

    ControlSignal final_control;
    std::optional<ControlSignal> final_direction; // last descent direction (stochastic runs)
    double final_objective = 0.0;
    double terminal_mismatch = 0.0;
    double penalty = 0.0;
    double uncontrolled_mismatch = 0.0;

    explicit RunReport(ControlSignal u) : final_control(std::move(u)) {}
};

struct RunTiming {
    double total_ms = 0.0;
    std::vector<double> per_iteration_ms; // cumulative at each iteration
};

struct RunResult {
    RunReport report;
    RunTiming timing;
};

/// Thrown when a run aborts mid-iteration (divergence guard, integrator
/// overflow); carries the partial report so callers can still write it.
class SolverFailure : public SolverError {
public:
    SolverFailure(const std::string& what, RunResult partial)
        : SolverError(what), partial_(std::move(partial)) {}
    [[nodiscard]] const RunResult& partial() const { return partial_; }

private:
    RunResult partial_;
};

/// Gradient descent with a constant step; rate == nullopt resolves the
/// default 1/(beta + lambda_max) from 20 power-iteration steps.
[[nodiscard]] RunResult run_gd(const ControlProblem& prob, const ControlSignal& u0,
                               std::optional<LearningRate> rate, StopRule stop, int threads = 1);

/// Conjugate gradient on the operator equation A u = b, residual update
/// r <- r - alpha A d, stopping on l2_norm_sq(r) < tol.
[[nodiscard]] RunResult run_cg(const ControlProblem& prob, const ControlSignal& u0,
                               StopRule stop, int threads = 1,
                               std::vector<ControlSignal>* iterate_log = nullptr);

/// Stochastic gradient descent: one parameter drawn i.i.d. from mu per
/// iteration. Deterministic given the seed. Default rate is Adaptive with
/// eta0 = 1/(beta + lambda_max).
[[nodiscard]] RunResult run_sgd(const ControlProblem& prob, const ControlSignal& u0,
                                std::optional<LearningRate> rate, StopRule stop,
                                std::uint64_t seed, int threads = 1);

/// Continuous stochastic gradient: aggregates the sampled gradient history
/// with nearest-neighbor weights. Default rate is Constant with
/// eta = 1/(beta + lambda_max).
[[nodiscard]] RunResult run_csg(const ControlProblem& prob, const ControlSignal& u0,
                                std::optional<LearningRate> rate, StopRule stop,
                                std::uint64_t seed, int threads = 1);

/// Largest-eigenvalue estimate of the CG operator from a fixed number of
/// power-iteration steps with a deterministic seeded start.
[[nodiscard]] double estimate_operator_norm(Objective& objective, int steps = 20);

struct SampledParam {
    double value = 0.0;
    int iteration = 0;
};

/// Nearest-neighbor (Voronoi) weights over the parameter grid: each grid
/// point's mass goes to the closest sampled value, ties (equidistant or
/// duplicate samples) resolved toward the most recent iteration.
/// Nonnegative, sum to 1.
[[nodiscard]] std::vector<double> csg_weights(const std::vector<SampledParam>& sampled,
                                              const ParameterSet& params);

/// Dense sample/gradient history behind the CSG direction
/// G^k = sum_l alpha_l grad_l. The Voronoi winner of each grid point is
/// maintained incrementally (a new sample takes a cell iff it is at least
/// as close as the current holder, recency breaking ties), which keeps
/// every push/aggregate pair at O(|K|) instead of O(history).
class CsgAggregator {
public:
    CsgAggregator(const ParameterSet& params, std::size_t capacity);

    void push(std::size_t nu_index, int iteration, ControlSignal gradient);
    [[nodiscard]] ControlSignal aggregate() const;

    /// Weight vector over the full history; matches csg_weights exactly.
    [[nodiscard]] std::vector<double> weights() const;
    [[nodiscard]] bool all_sampled() const;
    [[nodiscard]] std::size_t size() const { return gradients_.size(); }

private:
    const ParameterSet* params_;
    std::vector<ControlSignal> gradients_;
    std::vector<double> best_dist_;      // per grid point
    std::vector<std::size_t> winner_;    // per grid point, index into history
    std::vector<bool> seen_;
    std::size_t seen_count_ = 0;
};

} // namespace simcon
