#pragma once

#include <optional>
#include <vector>

#include "relaydde/model.hpp"

namespace relaydde {

// x(t) = c + k * exp(-(t - t_start)) on [t_start, t_end].
struct ExpArc {
  double t_start;
  double t_end;
  double c;
  double k;

  double operator()(double t) const;
  double start_value() const { return c + k; }
  double end_value() const;
};

struct ArcRoot {
  enum class Status { None, Found, NonTransversal };
  Status status = Status::None;
  double t = 0;

  bool found() const { return status == Status::Found; }
};

// Zero of the arc in (t_start, t_end]. NonTransversal flags the identically zero arc.
ArcRoot arc_zero(const ExpArc& arc);

// First time in (t_start, t_end] at which the arc equals level.
std::optional<double> arc_crossing(const ExpArc& arc, double level);

// Arc chain covering exactly [-tau, 0].
class History {
 public:
  // Validates coverage, continuity and a finite zero set.
  History(double tau, std::vector<ExpArc> arcs);

  static History constant(double tau, double value);

  double tau() const { return tau_; }
  const std::vector<ExpArc>& arcs() const { return arcs_; }
  double operator()(double s) const;

  // Sign-changing zeros in (-tau, 0).
  const std::vector<Zero>& zeros() const { return zeros_; }
  bool zero_at_start() const { return zero_at_start_; }
  bool zero_at_end() const { return zero_at_end_; }
  int touching_zeros() const { return touching_; }

  // At most one zero, and that one changes sign.
  bool in_z0() const;

 private:
  double tau_;
  std::vector<ExpArc> arcs_;
  std::vector<Zero> zeros_;
  bool zero_at_start_ = false;
  bool zero_at_end_ = false;
  int touching_ = 0;
};

struct Trajectory {
  History history;
  std::vector<ExpArc> arcs;  // covers [0, horizon]
  std::vector<Zero> zeros;   // zeros in (0, horizon]
  double horizon = 0;

  double tau() const { return history.tau(); }
  // Valid on [-tau, horizon].
  double operator()(double t) const;
  // The arc (history or solution) containing t; the later one at a junction.
  const ExpArc& arc_at(double t) const;
  // The state s -> x(t + s) on [-tau, 0] as a new history.
  History segment_at(double t) const;
};

Trajectory evolve(const FeedbackRule& rule, const History& history, double horizon,
                  std::optional<PulseWindow> pulse = std::nullopt);
Trajectory evolve(const ModelParams& p, const History& history, double horizon,
                  std::optional<PulseWindow> pulse = std::nullopt);

const std::vector<Zero>& zeros_of(const Trajectory& traj);

// Equality threshold used for event ties and zero snapping.
inline double time_tolerance(double t) { return 1e-13 * (t < 0 ? (-t > 1 ? -t : 1) : (t > 1 ? t : 1)); }

}  // namespace relaydde
