#pragma once

#include <optional>
#include <string>
#include <vector>

#include "simcon/optimizers.hpp"

namespace simcon {

/// Where the system family comes from: a named builder or a description file.
struct SystemSpec {
    std::string builder = "cart_pendulum"; // "cart_pendulum" | "brunovsky"; empty when file is set
    std::string file;
    int nparams = 10;
    int dim = 4;        // brunovsky state dimension
    double mass = 10.0; // cart mass
    double length = 1.0;
    std::optional<double> param_min; // defaults: [0.1, 1] cart, [1, 6] brunovsky
    std::optional<double> param_max;
};

struct RunConfig {
    SystemSpec system;
    Algorithm algo = Algorithm::CG;
    double beta = 1e-3;
    double t_final = 1.0;
    int n_steps = 200;
    double tol = 1e-4;
    int max_iter = 20000;
    std::uint64_t seed = 1;
    std::string rate = "auto";
    int threads = 1;
    int window = 10;
    std::vector<double> x0;     // empty: builder default
    std::vector<double> target; // empty: builder default
    std::string out;
    std::string traj_out;
};

[[nodiscard]] ParametricSystem build_system(const SystemSpec& spec);
[[nodiscard]] ControlProblem make_problem(const RunConfig& cfg);

/// "auto" -> nullopt; "constant:ETA"; "robbins:A,B"; "adaptive:ETA0[,SHRINK[,WINDOW]]".
[[nodiscard]] std::optional<LearningRate> parse_rate_spec(const std::string& spec);

[[nodiscard]] RunConfig run_config_from_json(const std::string& text,
                                             const std::string& origin = "<config>");
[[nodiscard]] RunConfig load_run_config(const std::string& path);

/// Validate, build the problem, and run the configured optimizer from the
/// zero initial control.
[[nodiscard]] RunResult execute_run(const RunConfig& cfg);

} // namespace simcon
