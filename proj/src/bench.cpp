#include "simcon/bench.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "simcon/errors.hpp"

namespace simcon {

namespace {

using nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool is_stochastic(Algorithm a) {
    return a == Algorithm::SGD || a == Algorithm::CSG;
}

} // namespace

double median(std::vector<double> values) {
    if (values.empty())
        throw ValidationError("median: empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1)
        return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchResult run_bench(const BenchConfig& config) {
    if (config.sweep_values.empty())
        throw ValidationError("bench: sweep value list must not be empty");
    for (std::size_t i = 0; i < config.sweep_values.size(); ++i) {
        if (config.sweep_values[i] < 1)
            throw ValidationError("bench: sweep values must be positive");
        if (i > 0 && config.sweep_values[i] <= config.sweep_values[i - 1])
            throw ValidationError("bench: sweep values must be increasing");
    }
    if (config.sweep_axis != "nparams" && config.sweep_axis != "dim")
        throw ValidationError("bench: sweep axis must be \"nparams\" or \"dim\"");
    if (config.algorithms.empty())
        throw ValidationError("bench: algorithm list must not be empty");
    if (config.seeds < 1)
        throw ValidationError("bench: needs at least one seed per cell");

    BenchResult result;
    result.sweep_axis = config.sweep_axis;
    for (const int value : config.sweep_values) {
        for (const Algorithm algo : config.algorithms) {
            BenchCell cell;
            cell.sweep_value = value;
            cell.algo = algo;

            RunConfig cfg = config.base;
            cfg.algo = algo;
            if (config.sweep_axis == "nparams")
                cfg.system.nparams = value;
            else
                cfg.system.dim = value;

            const int runs = is_stochastic(algo) ? config.seeds : 1;
            try {
                for (int i = 0; i < runs; ++i) {
                    cfg.seed = config.base.seed + static_cast<std::uint64_t>(i);
                    RunResult rr = execute_run(cfg);
                    cell.wall_ms.push_back(rr.timing.total_ms);
                    cell.reports.push_back(std::move(rr.report));
                }
                std::vector<double> iters, solves;
                double converged = 0.0;
                for (const RunReport& rep : cell.reports) {
                    iters.push_back(static_cast<double>(rep.iterations));
                    solves.push_back(static_cast<double>(rep.coupled_solves));
                    converged += rep.converged ? 1.0 : 0.0;
                }
                cell.median_iterations = median(iters);
                cell.median_wall_ms = median(cell.wall_ms);
                cell.median_coupled_solves = median(solves);
                cell.converged_fraction = converged / static_cast<double>(cell.reports.size());
            } catch (const SolverFailure& e) {
                cell.error = e.what();
            } catch (const SolverError& e) {
                cell.error = e.what();
            } catch (const ValidationError& e) {
                cell.error = e.what();
            }
            result.cells.push_back(std::move(cell));
        }
    }
    return result;
}

std::string bench_csv(const BenchResult& result) {
    std::string out = "axis,value,algorithm,runs,median_iterations,median_wall_ms,"
                      "median_coupled_solves,converged_fraction,error\n";
    for (const BenchCell& cell : result.cells) {
        out += result.sweep_axis + ',' + std::to_string(cell.sweep_value) + ',' +
               algorithm_name(cell.algo) + ',' + std::to_string(cell.reports.size()) + ',';
        if (cell.error.empty()) {
            out += fmt_double(cell.median_iterations) + ',' + fmt_double(cell.median_wall_ms) +
                   ',' + fmt_double(cell.median_coupled_solves) + ',' +
                   fmt_double(cell.converged_fraction) + ",\n";
        } else {
            std::string escaped = cell.error;
            std::replace(escaped.begin(), escaped.end(), ',', ';');
            std::replace(escaped.begin(), escaped.end(), '\n', ' ');
            out += "nan,nan,nan,nan," + escaped + '\n';
        }
    }
    return out;
}

BenchConfig bench_config_from_json(const std::string& text, const std::string& origin) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("bench config " + origin + ": JSON parse error: " + e.what());
    }
    if (!doc.is_object())
        throw ValidationError("bench config " + origin + ": top level must be an object");
    for (const auto& item : doc.items()) {
        static const std::set<std::string> known{"base", "sweep", "values", "seeds", "algorithms",
                                                 "out"};
        if (!known.contains(item.key()))
            throw ValidationError("bench config " + origin + ": unknown field \"" + item.key() +
                                  "\"");
    }

    BenchConfig cfg;
    if (doc.contains("base"))
        cfg.base = run_config_from_json(doc["base"].dump(), origin + "#base");
    if (doc.contains("sweep"))
        cfg.sweep_axis = doc["sweep"].get<std::string>();
    if (doc.contains("values"))
        cfg.sweep_values = doc["values"].get<std::vector<int>>();
    if (doc.contains("seeds"))
        cfg.seeds = doc["seeds"].get<int>();
    if (doc.contains("algorithms")) {
        for (const auto& name : doc["algorithms"]) {
            const auto algo = algorithm_from_name(name.get<std::string>());
            if (!algo)
                throw ValidationError("bench config " + origin + ": unknown algorithm \"" +
                                      name.get<std::string>() + "\"");
            cfg.algorithms.push_back(*algo);
        }
    }
    if (doc.contains("out"))
        cfg.out = doc["out"].get<std::string>();
    return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("bench config " + path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return bench_config_from_json(ss.str(), path);
}

} // namespace simcon
