#include "l0fa/trace.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "l0fa/csv_io.hpp"
#include "l0fa/errors.hpp"

namespace l0fa {

std::string to_string(DirectionKind kind) {
  switch (kind) {
    case DirectionKind::None: return "none";
    case DirectionKind::Newton: return "newton";
    case DirectionKind::GradientFallback: return "gradient-fallback";
    case DirectionKind::BlockCoordinate: return "bcd";
  }
  return "none";
}

DirectionKind direction_kind_from_string(const std::string& name) {
  if (name == "none") return DirectionKind::None;
  if (name == "newton") return DirectionKind::Newton;
  if (name == "gradient-fallback") return DirectionKind::GradientFallback;
  if (name == "bcd") return DirectionKind::BlockCoordinate;
  throw Error(ErrorKind::InvalidInput, "unknown direction kind '" + name + "'");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationCap: return "iteration-cap";
    case SolveStatus::LineSearchFailure: return "line-search-failure";
  }
  return "unknown";
}

int SolveTrace::step_count() const {
  int n = 0;
  for (const auto& r : rows) n += (r.direction_kind != DirectionKind::None);
  return n;
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << r.outer_iter << ',' << format_double(r.tau) << ',' << r.inner_iter << ','
        << format_double(r.objective_h_tau) << ',' << format_double(r.objective_f) << ','
        << format_double(r.residual_normalized) << ',' << r.support_size << ','
        << format_double(r.step_alpha) << ',' << to_string(r.direction_kind) << ','
        << r.wall_time_ns << '\n';
  }
}

SolveTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::InvalidInput, "trace file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw Error(ErrorKind::InvalidInput, "unexpected trace header");
  SolveTrace trace;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 10) {
      throw Error(ErrorKind::InvalidInput,
                  "trace line " + std::to_string(lineno) + " has " + std::to_string(fields.size()) +
                      " fields, expected 10");
    }
    TraceRow r;
    r.outer_iter = static_cast<int>(parse_int(fields[0]));
    r.tau = parse_double(fields[1]);
    r.inner_iter = static_cast<int>(parse_int(fields[2]));
    r.objective_h_tau = parse_double(fields[3]);
    r.objective_f = parse_double(fields[4]);
    r.residual_normalized = parse_double(fields[5]);
    r.support_size = static_cast<int>(parse_int(fields[6]));
    r.step_alpha = parse_double(fields[7]);
    r.direction_kind = direction_kind_from_string(fields[8]);
    r.wall_time_ns = parse_int(fields[9]);
    trace.rows.push_back(r);
  }
  return trace;
}

}  // namespace l0fa
