#include "simcon/report_io.hpp"

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "simcon/errors.hpp"
#include "simcon/integrate.hpp"

namespace simcon {

namespace {

using nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* history_kind_name(HistoryKind k) {
    switch (k) {
    case HistoryKind::Exact: return "exact";
    case HistoryKind::Estimate: return "estimate";
    case HistoryKind::None: return "none";
    }
    return "?";
}

ordered_json signal_to_json(const ControlSignal& u) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < u.values.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < u.values.cols(); ++c)
            row.push_back(u.values(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot open \"" + path + "\" for writing");
    out << text;
}

} // namespace

std::string report_to_json(const RunReport& report) {
    ordered_json doc;
    doc["schema"] = "simcon-run-report/1";
    doc["algorithm"] = algorithm_name(report.algorithm);
    doc["iterations"] = report.iterations;
    doc["converged"] = report.converged;
    doc["coupled_solves"] = report.coupled_solves;
    doc["rate_setup_solves"] = report.rate_setup_solves;
    doc["report_forward_solves"] = report.report_forward_solves;
    if (report.seed)
        doc["seed"] = *report.seed;
    else
        doc["seed"] = nullptr;
    doc["learning_rate"] = report.learning_rate_used;
    doc["objective_kind"] = history_kind_name(report.history_kind);
    doc["final_objective"] = report.final_objective;
    doc["terminal_mismatch"] = report.terminal_mismatch;
    doc["penalty"] = report.penalty;
    doc["uncontrolled_mismatch"] = report.uncontrolled_mismatch;
    doc["grid"] = {{"t_final", report.final_control.grid.t_final()},
                   {"n_steps", report.final_control.grid.n_steps()}};
    doc["final_control"] = signal_to_json(report.final_control);
    doc["functional_history"] = report.functional_history;
    doc["measure_history"] = report.measure_history;
    doc["solves_history"] = report.solves_history;
    doc["sampled_indices"] = report.sampled_indices;
    return doc.dump(2) + "\n";
}

void write_report_files(const RunReport& report, const RunTiming& timing,
                        const std::string& path) {
    write_text(path, report_to_json(report));

    const auto now = std::chrono::system_clock::now();
    const auto unix_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    ordered_json meta;
    meta["written_at_unix_ms"] = unix_ms;
    meta["total_wall_ms"] = timing.total_ms;
    write_text(path + ".meta.json", meta.dump(2) + "\n");
}

std::string convergence_csv(const RunReport& report, const RunTiming& timing) {
    std::string out = "iter,objective,measure,solves,wall_ms\n";
    const std::size_t n = report.measure_history.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double objective = i < report.functional_history.size()
                                     ? report.functional_history[i]
                                     : std::nan("");
        const long solves = i < report.solves_history.size() ? report.solves_history[i] : 0;
        const double wall =
            i < timing.per_iteration_ms.size() ? timing.per_iteration_ms[i] : std::nan("");
        out += std::to_string(i + 1) + ',' + fmt_double(objective) + ',' +
               fmt_double(report.measure_history[i]) + ',' + std::to_string(solves) + ',' +
               fmt_double(wall) + '\n';
    }
    return out;
}

std::string trajectory_csv(const ControlProblem& prob, const ControlSignal& u) {
    std::string out = "t,nu,component_index,value\n";
    for (std::size_t i = 0; i < prob.sys.family_size(); ++i) {
        const Trajectory x = integrate_forward(prob.sys.dynamics(i), prob.sys.input_matrix(), u,
                                               prob.x0, prob.grid);
        const std::string nu = fmt_double(prob.sys.params().value(i));
        for (int node = 0; node < prob.grid.n_nodes(); ++node) {
            const std::string t = fmt_double(prob.grid.node(node));
            for (int c = 0; c < x.dimension(); ++c) {
                out += t + ',' + nu + ',' + std::to_string(c) + ',' +
                       fmt_double(x.values(node, c)) + '\n';
            }
        }
    }
    return out;
}

void write_trajectory_csvs(const ControlProblem& prob, const ControlSignal& u,
                           const std::string& prefix) {
    write_text(prefix + "_controlled.csv", trajectory_csv(prob, u));
    const ControlSignal zero = ControlSignal::zero(prob.grid, prob.sys.input_dim());
    write_text(prefix + "_free.csv", trajectory_csv(prob, zero));
}

} // namespace simcon
