#include "hpdob/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace hpdob {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("malformed number '" + s + "' in trace csv");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

constexpr double TraceRecord::*kFields[] = {
    &TraceRecord::t,     &TraceRecord::q,      &TraceRecord::qdot,    &TraceRecord::q_ref,
    &TraceRecord::qdot_ref, &TraceRecord::u,   &TraceRecord::tau_d,   &TraceRecord::tau_dn,
    &TraceRecord::tau_hat, &TraceRecord::est_error};

}  // namespace

const std::vector<std::string>& trace_columns() {
  static const std::vector<std::string> cols = {"t",     "q",      "qdot",   "q_ref",   "qdot_ref",
                                                "u",     "tau_d",  "tau_dn", "tau_hat", "est_error"};
  return cols;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const auto& cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : trace.records) {
    for (std::size_t i = 0; i < std::size(kFields); ++i) {
      out << (i ? "," : "") << format_double(r.*kFields[i]);
    }
    out << '\n';
  }
}

Trace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace csv");
  if (split(line) != trace_columns()) throw std::runtime_error("unexpected trace csv header");

  Trace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != std::size(kFields)) throw std::runtime_error("wrong column count in trace csv");
    TraceRecord r;
    for (std::size_t i = 0; i < cells.size(); ++i) r.*kFields[i] = parse_double(cells[i]);
    trace.records.push_back(r);
  }
  if (trace.records.size() >= 2) trace.Ts = trace.records[1].t - trace.records[0].t;
  return trace;
}

nlohmann::json metrics_to_json(const Metrics& m) {
  return {{"rms_tracking", m.rms_tracking},
          {"rms_est_error", m.rms_est_error},
          {"max_est_error", m.max_est_error},
          {"diverged", m.diverged},
          {"settle_fraction", m.settle_fraction}};
}

void write_sweep_csv(std::ostream& out, const std::string& parameter,
                     const std::vector<SweepResult>& results) {
  out << parameter << ",rms_tracking,rms_est_error,max_est_error,diverged,settle_fraction\n";
  for (const auto& r : results) {
    out << format_double(r.value) << ',' << format_double(r.metrics.rms_tracking) << ','
        << format_double(r.metrics.rms_est_error) << ',' << format_double(r.metrics.max_est_error) << ','
        << (r.metrics.diverged ? 1 : 0) << ',' << format_double(r.metrics.settle_fraction) << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const std::vector<NamedRun>& runs) {
  if (runs.empty()) throw std::invalid_argument("nothing to compare");
  for (const auto& run : runs) {
    if (run.trace.Ts != runs.front().trace.Ts) {
      throw std::invalid_argument("runs '" + runs.front().name + "' and '" + run.name +
                                  "' use different sampling periods");
    }
  }
  std::size_t rows = 0;
  for (const auto& run : runs) rows = std::max(rows, run.trace.records.size());

  out << 't';
  for (const auto& run : runs) {
    out << ",tau_hat_" << run.name << ",est_error_" << run.name << ",q_" << run.name;
  }
  out << '\n';
  const double Ts = runs.front().trace.Ts;
  for (std::size_t k = 0; k < rows; ++k) {
    out << format_double(static_cast<double>(k) * Ts);
    for (const auto& run : runs) {
      if (k < run.trace.records.size()) {
        const auto& r = run.trace.records[k];
        out << ',' << format_double(r.tau_hat) << ',' << format_double(r.est_error) << ','
            << format_double(r.q);
      } else {
        out << ",,,";
      }
    }
    out << '\n';
  }
}

nlohmann::json ranking_json(const std::vector<NamedRun>& runs) {
  const auto rank_by = [&runs](double Metrics::*field) {
    std::vector<const NamedRun*> order;
    for (const auto& r : runs) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(), [field](const NamedRun* a, const NamedRun* b) {
      if (a->metrics.diverged != b->metrics.diverged) return !a->metrics.diverged;
      return a->metrics.*field < b->metrics.*field;
    });
    nlohmann::json arr = nlohmann::json::array();
    for (const auto* r : order) {
      arr.push_back({{"name", r->name}, {"value", r->metrics.*field}, {"diverged", r->metrics.diverged}});
    }
    return arr;
  };
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& r : runs) metrics[r.name] = metrics_to_json(r.metrics);
  return {{"by_rms_est_error", rank_by(&Metrics::rms_est_error)},
          {"by_rms_tracking", rank_by(&Metrics::rms_tracking)},
          {"metrics", metrics}};
}

}  // namespace hpdob
