#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hpdob/sim.hpp"

namespace hpdob {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Column order of trace.csv.
const std::vector<std::string>& trace_columns();

void write_trace_csv(std::ostream& out, const Trace& trace);
/// Inverse of write_trace_csv. Throws std::runtime_error on malformed input.
Trace read_trace_csv(std::istream& in);

nlohmann::json metrics_to_json(const Metrics& m);

/// sweep.csv: value followed by the Metrics fields.
void write_sweep_csv(std::ostream& out, const std::string& parameter,
                     const std::vector<SweepResult>& results);

struct NamedRun {
  std::string name;
  Trace trace;
  Metrics metrics;
};

/// Aligned comparison: t, then tau_hat/est_error/q per run. Runs that stopped
/// early (divergence) leave their trailing cells empty. Throws
/// std::invalid_argument when the runs do not share a sampling period.
void write_comparison_csv(std::ostream& out, const std::vector<NamedRun>& runs);

/// Runs ordered by rms_est_error and by rms_tracking, ascending, with diverged
/// runs last.
nlohmann::json ranking_json(const std::vector<NamedRun>& runs);

}  // namespace hpdob
