#pragma once

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace l0fa {

enum class DirectionKind { None, Newton, GradientFallback, BlockCoordinate };

std::string to_string(DirectionKind kind);
DirectionKind direction_kind_from_string(const std::string& name);

enum class SolveStatus { Converged, IterationCap, LineSearchFailure };

std::string to_string(SolveStatus status);

/// One solver iteration. Objective and residual values are taken at the
/// iterate the step starts from; step_alpha and direction_kind describe the
/// step taken from it. The last row of a solve has kind None and alpha 0.
struct TraceRow {
  int outer_iter = 0;
  double tau = 0.0;
  int inner_iter = 0;
  double objective_h_tau = 0.0;
  double objective_f = 0.0;
  double residual_normalized = 0.0;
  int support_size = 0;
  double step_alpha = 0.0;
  DirectionKind direction_kind = DirectionKind::None;
  std::int64_t wall_time_ns = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct SolveTrace {
  std::vector<TraceRow> rows;

  void append(const SolveTrace& other) { rows.insert(rows.end(), other.rows.begin(), other.rows.end()); }
  /// Steps actually taken (rows with a direction).
  int step_count() const;
  friend bool operator==(const SolveTrace&, const SolveTrace&) = default;
};

inline constexpr const char* kTraceHeader =
    "outer_iter,tau,inner_iter,objective_h_tau,objective_f,residual_normalized,"
    "support_size,step_alpha,direction_kind,wall_time_ns";

/// CSV with a header row, 17 significant digits.
void write_trace_csv(std::ostream& out, const SolveTrace& trace);
SolveTrace read_trace_csv(std::istream& in);

/// Timestamps for trace rows, relative to a common origin.
class TraceClock {
 public:
  TraceClock() : origin_(std::chrono::steady_clock::now()) {}
  std::int64_t elapsed_ns() const {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - origin_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point origin_;
};

}  // namespace l0fa
