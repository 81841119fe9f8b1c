#pragma once

#include <string>

#include "simcon/objective.hpp"
#include "simcon/optimizers.hpp"

namespace simcon {

/// Deterministic serialization: no timestamps or wall times, stable key
/// order, round-trip-exact doubles. Identical runs produce identical text.
[[nodiscard]] std::string report_to_json(const RunReport& report);

/// Writes the report to `path` and the timing/timestamp sidecar to
/// `path + ".meta.json"`.
void write_report_files(const RunReport& report, const RunTiming& timing,
                        const std::string& path);

/// Convergence history, columns fixed: iter,objective,measure,solves,wall_ms.
/// The objective column is "nan" when the algorithm tracks no functional
/// value (CG).
[[nodiscard]] std::string convergence_csv(const RunReport& report, const RunTiming& timing);

/// Node-major trajectory dump, columns fixed: t,nu,component_index,value.
[[nodiscard]] std::string trajectory_csv(const ControlProblem& prob, const ControlSignal& u);

/// Writes `prefix`_controlled.csv (with control u) and `prefix`_free.csv
/// (zero control).
void write_trajectory_csvs(const ControlProblem& prob, const ControlSignal& u,
                           const std::string& prefix);

} // namespace simcon
