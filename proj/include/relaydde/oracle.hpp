#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "relaydde/engine.hpp"
#include "relaydde/model.hpp"

namespace relaydde {

// Brute-force reference solution on a uniform grid over [-tau, t_end].
struct DenseTrajectory {
  double t0;  // = -tau
  double h;   // effective step: tau / ceil(tau / requested step)
  double tau;
  std::vector<double> x;
  std::vector<Zero> zeros;  // sign changes for t > 0, refined on the linear interpolant

  double time(std::size_t i) const { return t0 + static_cast<double>(i) * h; }
  double t_end() const { return time(x.size() - 1); }
  double operator()(double t) const;  // linear interpolation
};

struct DenseProblem {
  FeedbackRule rule;
  double tau;
  std::function<double(double)> history;  // on [-tau, 0]
  double horizon;
  std::optional<PulseWindow> pulse;
  double decay = 1.0;  // x' = -decay x + rule(x(t - tau)) (+ pulse)
};

// Fixed-step RK4; steps are split where the interpolated delayed state crosses a threshold
// and at pulse edges. Requires h <= tau / 100.
DenseTrajectory integrate_dense(const DenseProblem& problem, double h = 1e-4);
DenseTrajectory integrate_dense(const ModelParams& p, std::function<double(double)> history, double horizon,
                                std::optional<PulseWindow> pulse = std::nullopt, double h = 1e-4);

struct Comparison {
  double max_abs_dev;
  std::vector<double> zero_time_devs;  // paired by order
  std::size_t exact_zeros;
  std::size_t dense_zeros;

  double max_zero_dev() const;
  bool zero_counts_match() const { return exact_zeros == dense_zeros; }
};

Comparison compare(const Trajectory& exact, const DenseTrajectory& dense);

}  // namespace relaydde
