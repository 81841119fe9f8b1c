#pragma once

#include <string>
#include <vector>

#include "simcon/run_config.hpp"

namespace simcon {

/// Sweep of one axis (parameter-set cardinality or state dimension) over a
/// list of algorithms, several seeds per stochastic cell.
struct BenchConfig {
    RunConfig base;
    std::string sweep_axis = "nparams"; // "nparams" | "dim"
    std::vector<int> sweep_values;
    int seeds = 1;
    std::vector<Algorithm> algorithms;
    std::string out;
};

struct BenchCell {
    int sweep_value = 0;
    Algorithm algo = Algorithm::CG;
    std::vector<RunReport> reports; // per seed; deterministic algorithms run once
    std::vector<double> wall_ms;
    std::string error; // nonempty when the cell failed

    double median_iterations = 0.0;
    double median_wall_ms = 0.0;
    double median_coupled_solves = 0.0;
    double converged_fraction = 0.0;
};

struct BenchResult {
    std::string sweep_axis;
    std::vector<BenchCell> cells;
};

[[nodiscard]] BenchResult run_bench(const BenchConfig& config);

/// Columns fixed:
/// axis,value,algorithm,runs,median_iterations,median_wall_ms,median_coupled_solves,converged_fraction,error
[[nodiscard]] std::string bench_csv(const BenchResult& result);

[[nodiscard]] BenchConfig bench_config_from_json(const std::string& text,
                                                 const std::string& origin = "<config>");
[[nodiscard]] BenchConfig load_bench_config(const std::string& path);

[[nodiscard]] double median(std::vector<double> values);

} // namespace simcon
