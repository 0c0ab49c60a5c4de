#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relaydde/orbit.hpp"
#include "relaydde/pulse.hpp"

namespace relaydde {

struct CaseInterval {
  CaseCode code;
  double lo;
  double hi;
  bool lo_closed;
  bool hi_closed;

  bool contains(double d) const;
};

// Nonempty case intervals of [0, T~) in left-endpoint order.
std::vector<CaseInterval> case_intervals(const PeriodicOrbit& orbit, const Thresholds& th, double sigma);
std::vector<CaseInterval> case_sequence(const ModelParams& p, double a, double sigma, bool relaxed = false);

struct SweepOptions {
  bool simulate = false;  // fill simulated rows as well
  bool relaxed = false;
};

struct SweepTable {
  ModelParams params;
  double a;
  double sigma;
  int n;
  PeriodicOrbit orbit;
  Thresholds th;
  std::vector<CycleStats> rows;            // closed form at delta_i = i T~ / n (simulated when a >= beta_U)
  std::vector<CycleStats> simulated_rows;  // only with SweepOptions::simulate
  CycleStats left_limit;                   // last case formula evaluated at delta = T~
  std::vector<CaseInterval> intervals;
  std::vector<std::pair<std::string, double>> markers;
};

SweepTable cycle_length_map(const ModelParams& p, double a, double sigma, int n, SweepOptions opts = {});

enum class Shape { Unchanged, Increasing, Decreasing, IncreasingThenDecreasing, Mixed, TooShort };
enum class Relation { Equal, Above, Below, Mixed };

const char* to_string(Shape s);
const char* to_string(Relation r);

struct ColumnVerdict {
  std::string column;  // xmin, xmax or T
  Shape shape;
  Relation relation;
  std::string expected;  // e.g. "above, increasing"; empty when unconstrained
  bool pass;
  std::vector<std::string> failures;
};

struct IntervalVerdict {
  CaseCode code;
  std::size_t first_row;
  std::size_t last_row;
  std::vector<ColumnVerdict> columns;
  bool pass;
};

struct MonotonicityReport {
  std::string layout;  // "delta2 < t_max" or "delta2 >= t_max"
  bool pass;
  std::vector<IntervalVerdict> intervals;
};

// Checks every case run of the table against the expected direction of change of xmin, xmax and T.
MonotonicityReport monotonicity_report(const SweepTable& table);

}  // namespace relaydde
