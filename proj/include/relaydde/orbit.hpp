#pragma once

#include <array>
#include <optional>

#include "relaydde/engine.hpp"
#include "relaydde/model.hpp"

namespace relaydde {

// The slowly oscillating periodic solution, phased so that its minimum is at t = 0.
struct PeriodicOrbit {
  ModelParams params;
  double z1;      // first positive zero (rising)
  double z2;      // second zero (falling)
  double period;  // z2 + tau
  double x_min;
  double x_max;
  double t_max;  // z1 + tau
  double t_min;  // 0
  // Falling arc on [-tau, 0], rising arc on [0, t_max], falling arc on [t_max, period].
  std::array<ExpArc, 3> arcs;

  double operator()(double t) const;
  // z~_j with z~_0 = -tau; z~_{j+2} = z~_j + period.
  double zero(int j) const;
  // The segment s -> x~(t + s) on [-tau, 0].
  History segment(double t) const;
};

PeriodicOrbit periodic_solution(const ModelParams& p);

enum class MergePhase { Min, Max };
const char* to_string(MergePhase m);

struct OrbitMerge {
  double zero;  // x(zero + t) follows the orbit from z~_0 (Min) or z~_1 (Max)
  MergePhase phase;
  double joined;  // zero + tau: from here the state lies on the orbit
};

// Earliest zero z >= t_free after which the trajectory coincides with a translate of the orbit.
// The trajectory must be unforced after t_free and reach t_free + 2 period + 2 tau.
std::optional<OrbitMerge> merge_time(const Trajectory& traj, const PeriodicOrbit& orbit, double t_free = 0.0);

}  // namespace relaydde
