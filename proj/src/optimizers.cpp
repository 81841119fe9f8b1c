#include "simcon/optimizers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <random>
#include <string>

#include "simcon/errors.hpp"

namespace simcon {

namespace {

class Stopwatch {
public:
    [[nodiscard]] double ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    }

private:
    using Clock = std::chrono::steady_clock;
    Clock::time_point start_ = Clock::now();
};

void validate_stop(const StopRule& stop, StopRule::Kind expected, const char* who) {
    if (stop.kind != expected)
        throw ValidationError(std::string(who) + ": unsupported stop rule variant");
    if (!(stop.tol > 0.0))
        throw ValidationError(std::string(who) + ": stop tolerance must be positive");
    if (stop.max_iter < 1)
        throw ValidationError(std::string(who) + ": max_iter must be at least 1");
    if (stop.kind == StopRule::Kind::UpdateWindow && stop.window < 1)
        throw ValidationError(std::string(who) + ": stop window must be at least 1");
}

void validate_rate(const LearningRate& rate, const char* who) {
    switch (rate.kind) {
    case LearningRate::Kind::Constant:
        if (!(rate.eta >= 0.0) || !std::isfinite(rate.eta))
            throw ValidationError(std::string(who) + ": constant rate must be finite and >= 0");
        break;
    case LearningRate::Kind::RobbinsMonro:
        if (!(rate.rm_a > 0.0) || !(rate.rm_b > 0.0))
            throw ValidationError(std::string(who) + ": Robbins-Monro parameters must be positive");
        break;
    case LearningRate::Kind::Adaptive:
        if (!(rate.eta0 > 0.0))
            throw ValidationError(std::string(who) + ": adaptive initial rate must be positive");
        if (!(rate.shrink > 0.0 && rate.shrink < 1.0))
            throw ValidationError(std::string(who) + ": shrink factor must lie in (0,1)");
        if (rate.stall_window < 1)
            throw ValidationError(std::string(who) + ": stall window must be at least 1");
        break;
    }
}

/// Final/uncontrolled functional values for the report; forward-only solves.
void finalize_report(RunReport& report, Objective& obj, const ControlSignal& u,
                     long setup_solves) {
    report.final_control = u;
    report.rate_setup_solves = setup_solves;
    report.coupled_solves = obj.counters().coupled - setup_solves;
    const FunctionalValue fv = obj.evaluate(u);
    report.final_objective = fv.value;
    report.terminal_mismatch = fv.terminal_mismatch;
    report.penalty = fv.penalty;
    report.uncontrolled_mismatch = obj.evaluate(obj.zero_control()).terminal_mismatch;
    report.report_forward_solves = obj.counters().forward_only;
}

[[noreturn]] void abort_run(const std::string& what, RunReport report, RunTiming timing,
                            Objective& obj, long setup_solves) {
    report.converged = false;
    report.rate_setup_solves = setup_solves;
    report.coupled_solves = obj.counters().coupled - setup_solves;
    report.report_forward_solves = obj.counters().forward_only;
    timing.total_ms = timing.per_iteration_ms.empty() ? 0.0 : timing.per_iteration_ms.back();
    throw SolverFailure(what, RunResult{std::move(report), std::move(timing)});
}

std::vector<double> cumulative_weights(const ParameterSet& params) {
    std::vector<double> cum(params.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        acc += params.weight(i);
        cum[i] = acc;
    }
    return cum;
}

std::size_t draw_index(std::mt19937_64& rng, const std::vector<double>& cum) {
    // 53-bit uniform in [0,1); platform-independent given the generator.
    const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto it = std::upper_bound(cum.begin(), cum.end(), x);
    auto i = static_cast<std::size_t>(it - cum.begin());
    if (i >= cum.size())
        i = cum.size() - 1;
    return i;
}

double window_mean(const std::deque<double>& window) {
    double sum = 0.0;
    for (double v : window)
        sum += v;
    return sum / static_cast<double>(window.size());
}

/// Per-iteration schedule shared by the stochastic drivers; also owns the
/// adaptive stall logic (halve when the windowed mean of the functional
/// estimates stops decreasing).
class RateSchedule {
public:
    explicit RateSchedule(const LearningRate& rate) : rate_(rate) {
        if (rate_.kind == LearningRate::Kind::Adaptive)
            current_ = rate_.eta0;
        else if (rate_.kind == LearningRate::Kind::Constant)
            current_ = rate_.eta;
    }

    [[nodiscard]] double eta(int k) const {
        if (rate_.kind == LearningRate::Kind::RobbinsMonro)
            return rate_.rm_a / (rate_.rm_b + static_cast<double>(k));
        return current_;
    }

    void observe(int k, double f_estimate) {
        if (rate_.kind != LearningRate::Kind::Adaptive)
            return;
        stall_sum_ += f_estimate;
        if (k % rate_.stall_window != 0)
            return;
        const double mean = stall_sum_ / rate_.stall_window;
        if (have_prev_ && mean >= prev_mean_)
            current_ *= rate_.shrink;
        prev_mean_ = mean;
        have_prev_ = true;
        stall_sum_ = 0.0;
    }

private:
    LearningRate rate_;
    double current_ = 0.0;
    double stall_sum_ = 0.0;
    double prev_mean_ = 0.0;
    bool have_prev_ = false;
};

} // namespace

const char* algorithm_name(Algorithm a) {
    switch (a) {
    case Algorithm::GD: return "gd";
    case Algorithm::CG: return "cg";
    case Algorithm::SGD: return "sgd";
    case Algorithm::CSG: return "csg";
    }
    return "?";
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
    if (name == "gd") return Algorithm::GD;
    if (name == "cg") return Algorithm::CG;
    if (name == "sgd") return Algorithm::SGD;
    if (name == "csg") return Algorithm::CSG;
    return std::nullopt;
}

LearningRate LearningRate::constant(double eta) {
    LearningRate r;
    r.kind = Kind::Constant;
    r.eta = eta;
    validate_rate(r, "LearningRate::constant");
    return r;
}

LearningRate LearningRate::robbins_monro(double a, double b) {
    LearningRate r;
    r.kind = Kind::RobbinsMonro;
    r.rm_a = a;
    r.rm_b = b;
    validate_rate(r, "LearningRate::robbins_monro");
    return r;
}

LearningRate LearningRate::adaptive(double eta0, double shrink, int stall_window) {
    LearningRate r;
    r.kind = Kind::Adaptive;
    r.eta0 = eta0;
    r.shrink = shrink;
    r.stall_window = stall_window;
    validate_rate(r, "LearningRate::adaptive");
    return r;
}

StopRule StopRule::grad_norm_sq(double tol, int max_iter) {
    StopRule s;
    s.kind = Kind::GradNormSq;
    s.tol = tol;
    s.max_iter = max_iter;
    return s;
}

StopRule StopRule::update_window(double tol, int max_iter, int window) {
    StopRule s;
    s.kind = Kind::UpdateWindow;
    s.tol = tol;
    s.max_iter = max_iter;
    s.window = window;
    return s;
}

double estimate_operator_norm(Objective& objective, int steps) {
    const ControlProblem& prob = objective.problem();
    std::mt19937_64 rng(0x5eedf00dull);
    Matrix v(prob.grid.n_nodes(), prob.sys.input_dim());
    for (Eigen::Index r = 0; r < v.rows(); ++r)
        for (Eigen::Index c = 0; c < v.cols(); ++c)
            v(r, c) = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
    ControlSignal vec(prob.grid, std::move(v));
    vec.values /= std::sqrt(l2_norm_sq(vec));

    double lambda = prob.beta;
    for (int s = 0; s < steps; ++s) {
        const ControlSignal w = objective.apply_cg_operator(vec);
        lambda = l2_inner(vec, w);
        const double norm = std::sqrt(l2_norm_sq(w));
        if (!(norm > 0.0))
            break;
        vec.values = w.values / norm;
    }
    return lambda;
}

RunResult run_gd(const ControlProblem& prob, const ControlSignal& u0,
                 std::optional<LearningRate> rate, StopRule stop, int threads) {
    validate_stop(stop, StopRule::Kind::GradNormSq, "run_gd");
    Objective obj(prob, threads);
    Stopwatch clock;

    double eta;
    if (rate) {
        if (rate->kind != LearningRate::Kind::Constant)
            throw ValidationError("run_gd: needs a Constant learning rate");
        validate_rate(*rate, "run_gd");
        eta = rate->eta;
    } else {
        eta = 1.0 / (prob.beta + estimate_operator_norm(obj));
    }
    const long setup = obj.counters().coupled;

    RunReport report(u0);
    report.algorithm = Algorithm::GD;
    report.history_kind = HistoryKind::Exact;
    report.learning_rate_used = eta;
    RunTiming timing;

    ControlSignal u = u0;
    double f_initial = 0.0;
    try {
        for (int k = 1; k <= stop.max_iter; ++k) {
            auto [g, fv] = obj.gradient_full_with_value(u);
            report.functional_history.push_back(fv.value);
            if (k == 1)
                f_initial = fv.value;
            else if (fv.value > 10.0 * f_initial && fv.value > 1e-12)
                throw SolverError("run_gd: diverging, F exceeded 10x its initial value at iteration " +
                                  std::to_string(k));
            const double gsq = l2_norm_sq(g);
            report.measure_history.push_back(gsq);
            u.values -= eta * g.values;
            report.iterations = k;
            report.solves_history.push_back(obj.counters().coupled - setup);
            timing.per_iteration_ms.push_back(clock.ms());
            if (gsq < stop.tol) {
                report.converged = true;
                break;
            }
        }
        finalize_report(report, obj, u, setup);
    } catch (const SolverFailure&) {
        throw;
    } catch (const SolverError& e) {
        report.final_control = u;
        abort_run(e.what(), std::move(report), std::move(timing), obj, setup);
    }
    timing.total_ms = clock.ms();
    return RunResult{std::move(report), std::move(timing)};
}

RunResult run_cg(const ControlProblem& prob, const ControlSignal& u0, StopRule stop, int threads,
                 std::vector<ControlSignal>* iterate_log) {
    validate_stop(stop, StopRule::Kind::GradNormSq, "run_cg");
    Objective obj(prob, threads);
    Stopwatch clock;

    RunReport report(u0);
    report.algorithm = Algorithm::CG;
    report.history_kind = HistoryKind::None;
    RunTiming timing;

    ControlSignal u = u0;
    try {
        const ControlSignal b = obj.cg_rhs();
        const ControlSignal au0 = obj.apply_cg_operator(u0); // free for the zero start
        ControlSignal r(prob.grid, b.values - au0.values);
        ControlSignal d = r;
        double rho = l2_norm_sq(r);
        if (iterate_log)
            iterate_log->push_back(u);

        if (rho < stop.tol) {
            report.converged = true;
        } else {
            for (int k = 1; k <= stop.max_iter; ++k) {
                const ControlSignal q = obj.apply_cg_operator(d);
                const double dq = l2_inner(d, q);
                if (!(dq > 0.0))
                    throw SolverError("run_cg: operator indefiniteness, d^T A d = " +
                                      std::to_string(dq) + " at iteration " + std::to_string(k) +
                                      "; signals a bug upstream");
                const double alpha = rho / dq;
                u.values += alpha * d.values;
                r.values -= alpha * q.values;
                const double rho_new = l2_norm_sq(r);
                report.measure_history.push_back(rho_new);
                report.iterations = k;
                report.solves_history.push_back(obj.counters().coupled);
                timing.per_iteration_ms.push_back(clock.ms());
                if (iterate_log)
                    iterate_log->push_back(u);
                if (rho_new < stop.tol) {
                    report.converged = true;
                    break;
                }
                d.values = r.values + (rho_new / rho) * d.values;
                rho = rho_new;
            }
        }
        finalize_report(report, obj, u, 0);
    } catch (const SolverFailure&) {
        throw;
    } catch (const SolverError& e) {
        report.final_control = u;
        abort_run(e.what(), std::move(report), std::move(timing), obj, 0);
    }
    timing.total_ms = clock.ms();
    return RunResult{std::move(report), std::move(timing)};
}

namespace {

/// Shared skeleton of the two stochastic drivers; `direction` produces the
/// descent direction from the freshly sampled gradient.
template <typename DirectionFn>
RunResult run_stochastic(Algorithm algo, const char* who, const ControlProblem& prob,
                         const ControlSignal& u0, std::optional<LearningRate> rate, StopRule stop,
                         std::uint64_t seed, int threads, LearningRate::Kind default_kind,
                         DirectionFn&& direction) {
    validate_stop(stop, StopRule::Kind::UpdateWindow, who);
    Objective obj(prob, threads);
    Stopwatch clock;

    LearningRate resolved;
    if (rate) {
        validate_rate(*rate, who);
        resolved = *rate;
    } else {
        const double eta = 1.0 / (prob.beta + estimate_operator_norm(obj));
        resolved = default_kind == LearningRate::Kind::Adaptive ? LearningRate::adaptive(eta)
                                                                : LearningRate::constant(eta);
    }
    const long setup = obj.counters().coupled;

    RunReport report(u0);
    report.algorithm = algo;
    report.history_kind = HistoryKind::Estimate;
    report.seed = seed;
    report.learning_rate_used = resolved.kind == LearningRate::Kind::RobbinsMonro
                                    ? resolved.rm_a / (resolved.rm_b + 1.0)
                                    : (resolved.kind == LearningRate::Kind::Adaptive ? resolved.eta0
                                                                                     : resolved.eta);
    RunTiming timing;

    std::mt19937_64 rng(seed);
    const std::vector<double> cum = cumulative_weights(prob.sys.params());
    RateSchedule schedule(resolved);
    std::deque<double> window;
    ControlSignal u = u0;

    // Divergence guard on windowed means: single-sample estimates disperse
    // across the family, so only a sustained rise is meaningful.
    std::deque<double> estimate_window;
    double estimate_baseline = -1.0;

    try {
        for (int k = 1; k <= stop.max_iter; ++k) {
            const std::size_t idx = draw_index(rng, cum);
            const GradientSample sample = obj.gradient_single(u, idx);
            report.sampled_indices.push_back(static_cast<int>(idx));
            report.functional_history.push_back(sample.f_estimate);
            estimate_window.push_back(sample.f_estimate);
            if (static_cast<int>(estimate_window.size()) > stop.window)
                estimate_window.pop_front();
            if (static_cast<int>(estimate_window.size()) == stop.window) {
                const double mean_est = window_mean(estimate_window);
                if (estimate_baseline < 0.0)
                    estimate_baseline = mean_est;
                else if (mean_est > 10.0 * estimate_baseline && mean_est > 1e-12)
                    throw SolverError(std::string(who) +
                                      ": diverging, windowed functional estimate exceeded 10x its "
                                      "initial level at iteration " +
                                      std::to_string(k));
            }

            const ControlSignal dir = direction(k, sample);
            const double eta_k = schedule.eta(k);
            ControlSignal du(prob.grid, eta_k * dir.values);
            u.values -= du.values;
            const double update_sq = l2_norm_sq(du);
            report.measure_history.push_back(update_sq);
            report.solves_history.push_back(obj.counters().coupled - setup);
            timing.per_iteration_ms.push_back(clock.ms());
            report.iterations = k;
            report.final_direction = dir;

            schedule.observe(k, sample.f_estimate);
            window.push_back(update_sq);
            if (static_cast<int>(window.size()) > stop.window)
                window.pop_front();
            if (static_cast<int>(window.size()) == stop.window && window_mean(window) < stop.tol) {
                report.converged = true;
                break;
            }
        }
        finalize_report(report, obj, u, setup);
    } catch (const SolverFailure&) {
        throw;
    } catch (const SolverError& e) {
        report.final_control = u;
        abort_run(e.what(), std::move(report), std::move(timing), obj, setup);
    }
    timing.total_ms = clock.ms();
    return RunResult{std::move(report), std::move(timing)};
}

} // namespace

RunResult run_sgd(const ControlProblem& prob, const ControlSignal& u0,
                  std::optional<LearningRate> rate, StopRule stop, std::uint64_t seed,
                  int threads) {
    return run_stochastic(Algorithm::SGD, "run_sgd", prob, u0, std::move(rate), stop, seed,
                          threads, LearningRate::Kind::Adaptive,
                          [](int, const GradientSample& s) { return s.combined; });
}

RunResult run_csg(const ControlProblem& prob, const ControlSignal& u0,
                  std::optional<LearningRate> rate, StopRule stop, std::uint64_t seed,
                  int threads) {
    CsgAggregator aggregator(prob.sys.params(), static_cast<std::size_t>(stop.max_iter));
    return run_stochastic(Algorithm::CSG, "run_csg", prob, u0, std::move(rate), stop, seed,
                          threads, LearningRate::Kind::Constant,
                          [&aggregator](int k, const GradientSample& s) {
                              aggregator.push(s.nu_index, k, s.combined);
                              return aggregator.aggregate();
                          });
}

std::vector<double> csg_weights(const std::vector<SampledParam>& sampled,
                                const ParameterSet& params) {
    if (sampled.empty())
        throw ValidationError("csg_weights: empty sample history");
    std::vector<double> alpha(sampled.size(), 0.0);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double nu = params.value(i);
        std::size_t best = 0;
        double best_dist = std::abs(nu - sampled[0].value);
        for (std::size_t l = 1; l < sampled.size(); ++l) {
            const double dist = std::abs(nu - sampled[l].value);
            if (dist < best_dist ||
                (dist == best_dist && sampled[l].iteration > sampled[best].iteration)) {
                best = l;
                best_dist = dist;
            }
        }
        alpha[best] += params.weight(i);
    }
    return alpha;
}

CsgAggregator::CsgAggregator(const ParameterSet& params, std::size_t capacity)
    : params_(&params), best_dist_(params.size()), winner_(params.size()),
      seen_(params.size(), false) {
    gradients_.reserve(capacity);
}

void CsgAggregator::push(std::size_t nu_index, int iteration, ControlSignal gradient) {
    if (nu_index >= params_->size())
        throw ValidationError("CsgAggregator: parameter index out of range");
    (void)iteration; // pushes arrive in iteration order, so "newest" is "last"
    const double value = params_->value(nu_index);
    const std::size_t sample = gradients_.size();
    gradients_.push_back(std::move(gradient));
    for (std::size_t i = 0; i < params_->size(); ++i) {
        const double dist = std::abs(params_->value(i) - value);
        if (sample == 0 || dist <= best_dist_[i]) { // ties go to the newest sample
            best_dist_[i] = dist;
            winner_[i] = sample;
        }
    }
    if (!seen_[nu_index]) {
        seen_[nu_index] = true;
        ++seen_count_;
    }
}

std::vector<double> CsgAggregator::weights() const {
    if (gradients_.empty())
        throw ValidationError("CsgAggregator: nothing sampled yet");
    std::vector<double> alpha(gradients_.size(), 0.0);
    for (std::size_t i = 0; i < params_->size(); ++i)
        alpha[winner_[i]] += params_->weight(i);
    return alpha;
}

ControlSignal CsgAggregator::aggregate() const {
    if (gradients_.empty())
        throw ValidationError("CsgAggregator: nothing sampled yet");
    // Masses per distinct winning sample, accumulated and summed in
    // ascending history order (same order as the csg_weights reference).
    std::vector<std::pair<std::size_t, double>> cells;
    cells.reserve(params_->size());
    for (std::size_t i = 0; i < params_->size(); ++i)
        cells.emplace_back(winner_[i], params_->weight(i));
    std::stable_sort(cells.begin(), cells.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    Matrix acc = Matrix::Zero(gradients_.front().values.rows(), gradients_.front().values.cols());
    std::size_t i = 0;
    while (i < cells.size()) {
        const std::size_t sample = cells[i].first;
        double alpha = 0.0;
        for (; i < cells.size() && cells[i].first == sample; ++i)
            alpha += cells[i].second;
        acc += alpha * gradients_[sample].values;
    }
    return ControlSignal(gradients_.front().grid, std::move(acc));
}

bool CsgAggregator::all_sampled() const {
    return seen_count_ == params_->size();
}

} // namespace simcon
