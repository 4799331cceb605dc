#pragma once

#include "fsi/asymptotics.hpp"
#include "fsi/diagnostics.hpp"
#include "fsi/scenario.hpp"

#include <string>
#include <vector>

namespace fsi {

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    std::vector<TrajectorySnapshot> snapshots; ///< in-memory, for asymptotics
    State final_state;
    bool aborted = false;
    std::string abort_reason;
    int steps = 0;
    double wall_seconds = 0;
    double crucial_ratio_sup = 0;
    std::vector<std::string> output_files;
};

/// Build the discretization, generate initial data, march to T_end, stream
/// diagnostics/snapshots, and (when write_outputs) emit timeseries.csv,
/// theorem2.csv, report.json and binary snapshots under sc.output_dir.
/// Aborts cleanly on guard violations, keeping the last valid state.
RunResult run_scenario(const Scenario& sc, bool write_outputs = true, bool quiet = false);

/// Theorem-2 shadow report over a finished run; also written to
/// convergence_report.json (plus per-checkpoint profile CSVs) when a
/// directory is given.
ConvergenceReport make_convergence_report(const Scenario& sc, const RunResult& rr,
                                          const std::string& out_dir = "");

} // namespace fsi
