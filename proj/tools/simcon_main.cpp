// Command-line front end: run | bench | check | costmodel.
// Exit codes: 0 success, 1 validation error, 2 solver failure.

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simcon/bench.hpp"
#include "simcon/controllability.hpp"
#include "simcon/cost_model.hpp"
#include "simcon/errors.hpp"
#include "simcon/report_io.hpp"
#include "simcon/run_config.hpp"
#include "simcon/system_io.hpp"

namespace {

using namespace simcon;

struct CommonFlags {
    std::string config;
    std::string system;
    std::string algo;
    int nparams = 0;
    int dim = 0;
    double mass = 0.0;
    double length = 0.0;
    double param_min = 0.0;
    double param_max = 0.0;
    double beta = 0.0;
    double tfinal = 0.0;
    int nsteps = 0;
    double tol = 0.0;
    int max_iter = 0;
    std::uint64_t seed = 0;
    std::string rate;
    int threads = 0;
    int window = 0;
    std::vector<double> x0;
    std::vector<double> target;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON config file; flags override its fields");
    cmd->add_option("--system", f.system, "cart_pendulum | brunovsky | path to a system file");
    cmd->add_option("--algo", f.algo, "gd | cg | sgd | csg");
    cmd->add_option("--nparams", f.nparams, "parameter-set cardinality");
    cmd->add_option("--dim", f.dim, "state dimension (brunovsky)");
    cmd->add_option("--mass", f.mass, "cart mass (cart_pendulum)");
    cmd->add_option("--length", f.length, "pendulum length metadata (cart_pendulum)");
    cmd->add_option("--param-min", f.param_min, "smallest parameter value");
    cmd->add_option("--param-max", f.param_max, "largest parameter value");
    cmd->add_option("--beta", f.beta, "control penalty");
    cmd->add_option("--tfinal", f.tfinal, "time horizon");
    cmd->add_option("--nsteps", f.nsteps, "time-grid intervals");
    cmd->add_option("--tol", f.tol, "stop tolerance");
    cmd->add_option("--max-iter", f.max_iter, "iteration cap");
    cmd->add_option("--seed", f.seed, "RNG seed (stochastic runs)");
    cmd->add_option("--rate", f.rate,
                    "auto | constant:ETA | robbins:A,B | adaptive:ETA0[,SHRINK[,WINDOW]]");
    cmd->add_option("--threads", f.threads, "workers for the per-parameter solves");
    cmd->add_option("--window", f.window, "stop window (stochastic runs)");
    cmd->add_option("--x0", f.x0, "initial state")->expected(-1);
    cmd->add_option("--target", f.target, "target state")->expected(-1);
}

void apply_system_flag(SystemSpec& spec, const std::string& value) {
    if (value == "cart_pendulum" || value == "brunovsky") {
        spec.builder = value;
        spec.file.clear();
    } else {
        spec.file = value;
        spec.builder.clear();
    }
}

RunConfig merge_run_config(const CLI::App* cmd, const CommonFlags& f, RunConfig cfg) {
    if (cmd->count("--config"))
        cfg = load_run_config(f.config);
    if (cmd->count("--system"))
        apply_system_flag(cfg.system, f.system);
    if (cmd->count("--nparams"))
        cfg.system.nparams = f.nparams;
    if (cmd->count("--dim"))
        cfg.system.dim = f.dim;
    if (cmd->count("--mass"))
        cfg.system.mass = f.mass;
    if (cmd->count("--length"))
        cfg.system.length = f.length;
    if (cmd->count("--param-min"))
        cfg.system.param_min = f.param_min;
    if (cmd->count("--param-max"))
        cfg.system.param_max = f.param_max;
    if (cmd->count("--algo")) {
        const auto algo = algorithm_from_name(f.algo);
        if (!algo)
            throw ValidationError("unknown algorithm \"" + f.algo +
                                  "\" (expected gd, cg, sgd, csg)");
        cfg.algo = *algo;
    }
    if (cmd->count("--beta"))
        cfg.beta = f.beta;
    if (cmd->count("--tfinal"))
        cfg.t_final = f.tfinal;
    if (cmd->count("--nsteps"))
        cfg.n_steps = f.nsteps;
    if (cmd->count("--tol"))
        cfg.tol = f.tol;
    if (cmd->count("--max-iter"))
        cfg.max_iter = f.max_iter;
    if (cmd->count("--seed"))
        cfg.seed = f.seed;
    if (cmd->count("--rate"))
        cfg.rate = f.rate;
    if (cmd->count("--threads"))
        cfg.threads = f.threads;
    if (cmd->count("--window"))
        cfg.window = f.window;
    if (cmd->count("--x0"))
        cfg.x0 = f.x0;
    if (cmd->count("--target"))
        cfg.target = f.target;
    return cfg;
}

void write_run_artifacts(const RunConfig& cfg, const RunReport& report, const RunTiming& timing) {
    if (!cfg.out.empty()) {
        write_report_files(report, timing, cfg.out);
        std::ofstream csv(cfg.out + ".convergence.csv", std::ios::binary);
        csv << convergence_csv(report, timing);
    }
    if (!cfg.traj_out.empty()) {
        const ControlProblem prob = make_problem(cfg);
        write_trajectory_csvs(prob, report.final_control, cfg.traj_out);
    }
}

int cmd_run(const CLI::App* cmd, const CommonFlags& flags, const std::string& out,
            const std::string& traj_out) {
    RunConfig cfg = merge_run_config(cmd, flags, RunConfig{});
    if (cmd->count("--out"))
        cfg.out = out;
    if (cmd->count("--traj-out"))
        cfg.traj_out = traj_out;
    try {
        const RunResult result = execute_run(cfg);
        write_run_artifacts(cfg, result.report, result.timing);
        const RunReport& r = result.report;
        std::printf("%s: %s after %d iterations, F = %.6e, mismatch = %.6e "
                    "(uncontrolled %.6e), coupled solves = %ld, wall = %.1f ms\n",
                    algorithm_name(r.algorithm), r.converged ? "converged" : "stopped",
                    r.iterations, r.final_objective, r.terminal_mismatch, r.uncontrolled_mismatch,
                    r.coupled_solves, result.timing.total_ms);
        return 0;
    } catch (const SolverFailure& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        write_run_artifacts(cfg, e.partial().report, e.partial().timing);
        return 2;
    }
}

int cmd_bench(const CLI::App* cmd, const CommonFlags& flags, const std::string& bench_config,
              const std::string& sweep, const std::vector<int>& values, int seeds,
              const std::vector<std::string>& algos, const std::string& out) {
    BenchConfig cfg;
    if (cmd->count("--bench-config"))
        cfg = load_bench_config(bench_config);
    cfg.base = merge_run_config(cmd, flags, cfg.base);
    if (cmd->count("--sweep"))
        cfg.sweep_axis = sweep;
    if (cmd->count("--values"))
        cfg.sweep_values = values;
    if (cmd->count("--seeds"))
        cfg.seeds = seeds;
    if (cmd->count("--algos")) {
        cfg.algorithms.clear();
        for (const auto& name : algos) {
            const auto algo = algorithm_from_name(name);
            if (!algo)
                throw ValidationError("unknown algorithm \"" + name + "\"");
            cfg.algorithms.push_back(*algo);
        }
    }
    if (cmd->count("--out"))
        cfg.out = out;

    const BenchResult result = run_bench(cfg);
    const std::string csv = bench_csv(result);
    if (!cfg.out.empty()) {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f)
            throw ValidationError("cannot open \"" + cfg.out + "\" for writing");
        f << csv;
    }
    std::fputs(csv.c_str(), stdout);
    for (const BenchCell& cell : result.cells)
        if (!cell.error.empty())
            return 2;
    return 0;
}

int cmd_check(const CLI::App* cmd, const CommonFlags& flags, double rank_tol, int quad_steps) {
    const RunConfig cfg = merge_run_config(cmd, flags, RunConfig{});
    const ParametricSystem sys = build_system(cfg.system);
    const AugmentedSystem aug = assemble_augmented(sys);
    const ControllabilityReport report = hautus_check(aug, rank_tol);

    std::printf("system: %s, N = %d, M = %d, |K| = %zu, augmented dimension %d\n",
                sys.builder().name.c_str(), sys.state_dim(), sys.input_dim(), sys.family_size(),
                aug.block_dim * aug.block_count);
    if (report.controllable) {
        std::printf("hautus: controllable (full rank %d at every eigenvalue)\n",
                    report.rank_required);
    } else {
        std::printf("hautus: NOT controllable, rank %d < %d at eigenvalue %.6g%+.6gi\n",
                    report.rank_found, report.rank_required, report.failing_eigenvalue->real(),
                    report.failing_eigenvalue->imag());
    }
    const Matrix w = gramian(aug, cfg.t_final, quad_steps);
    std::printf("gramian condition number rho = %.6g\n", condition_number(w));
    return 0;
}

int cmd_costmodel(const CLI::App* cmd, const CommonFlags& flags, double k_size, double epsilon,
                  double rho, int quad_steps) {
    if (!cmd->count("--rho")) {
        const RunConfig cfg = merge_run_config(cmd, flags, RunConfig{});
        const ParametricSystem sys = build_system(cfg.system);
        const Matrix w = gramian(assemble_augmented(sys), cfg.t_final, quad_steps);
        rho = condition_number(w);
        std::printf("rho computed from the augmented gramian: %.6g\n", rho);
        if (!cmd->count("--K"))
            k_size = static_cast<double>(sys.family_size());
    }
    const CostPrediction p = predicted_costs(k_size, epsilon, rho);
    std::printf("rate constants:    c_gd = %.6g, c_cg = %.6g\n", p.c_gd, p.c_cg);
    std::printf("predicted cost:    gd = %.6g, cg = %.6g, sgd/csg = %.6g  (relative units)\n",
                p.cost_gd, p.cost_cg, p.sgd_cost);
    std::printf("break-even |K|:    %.6g\n", p.threshold_k);
    std::printf("recommendation:    %s\n", p.recommendation.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"simultaneous-control solver suite"};
    app.require_subcommand(1);

    CommonFlags run_flags, bench_flags, check_flags, cm_flags;

    CLI::App* run = app.add_subcommand("run", "run one optimizer and write its report");
    add_common_flags(run, run_flags);
    std::string run_out, run_traj_out;
    run->add_option("--out", run_out, "report file");
    run->add_option("--traj-out", run_traj_out, "trajectory CSV prefix");

    CLI::App* bench = app.add_subcommand("bench", "sweep a problem axis over algorithms");
    add_common_flags(bench, bench_flags);
    std::string bench_config, sweep, bench_out;
    std::vector<int> values;
    int seeds = 0;
    std::vector<std::string> algos;
    bench->add_option("--bench-config", bench_config, "JSON bench config");
    bench->add_option("--sweep", sweep, "nparams | dim");
    bench->add_option("--values", values, "sweep values")->expected(-1);
    bench->add_option("--seeds", seeds, "seeds per stochastic cell");
    bench->add_option("--algos", algos, "algorithms to compare")->expected(-1);
    bench->add_option("--out", bench_out, "CSV output path");

    CLI::App* check = app.add_subcommand("check", "controllability diagnostics");
    add_common_flags(check, check_flags);
    double rank_tol = 1e-10;
    int quad_steps = 400;
    check->add_option("--rank-tol", rank_tol, "relative numerical-rank tolerance");
    check->add_option("--quad-steps", quad_steps, "gramian quadrature steps");

    CLI::App* costmodel = app.add_subcommand("costmodel", "predicted algorithm costs");
    add_common_flags(costmodel, cm_flags);
    double k_size = 10.0, epsilon = 1e-4, rho = 10.0;
    int cm_quad_steps = 400;
    costmodel->add_option("--K", k_size, "parameter-set cardinality");
    costmodel->add_option("--epsilon", epsilon, "target tolerance");
    costmodel->add_option("--rho", rho, "gramian condition number (else computed from --system)");
    costmodel->add_option("--quad-steps", cm_quad_steps, "gramian quadrature steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (run->parsed())
            return cmd_run(run, run_flags, run_out, run_traj_out);
        if (bench->parsed())
            return cmd_bench(bench, bench_flags, bench_config, sweep, values, seeds, algos,
                             bench_out);
        if (check->parsed())
            return cmd_check(check, check_flags, rank_tol, quad_steps);
        if (costmodel->parsed())
            return cmd_costmodel(costmodel, cm_flags, k_size, epsilon, rho, cm_quad_steps);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 2;
    }
    return 1;
}
