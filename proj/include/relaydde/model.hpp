#pragma once

#include <optional>
#include <string>
#include <vector>

namespace relaydde {

// Dimensional model: x' = -gamma x + (b_L if x(t - tau_raw) < theta else b_U).
struct RawParams {
  double gamma;
  double b_l;
  double b_u;
  double theta;
  double tau_raw;
};

// Nondimensional model: x' = -x + (beta_L if x(t - tau) < 0 else -beta_U).
struct ModelParams {
  double tau;
  double beta_l;
  double beta_u;
};

enum class Regime { Oscillatory, GasUpper, GasLower };

struct RegimeInfo {
  Regime regime;
  std::optional<double> equilibrium;  // set for the two globally attracting cases
};

const char* to_string(Regime r);

void validate(const RawParams& raw);
void validate(const ModelParams& p);

ModelParams nondimensionalize(const RawParams& raw);
RegimeInfo regime(const ModelParams& p);

// Throws RegimeError unless both levels are positive.
void require_oscillatory(const ModelParams& p);

// A single rectangular pulse of height a on [delta, delta + sigma].
struct PulseSpec {
  double a;
  double delta;
  double sigma;
  bool relaxed = false;
};

// Checks 0 < sigma <= tau, a > 0, and a < beta_U unless relaxed.
void validate(const ModelParams& p, const PulseSpec& pulse);
PulseSpec make_pulse(const ModelParams& p, double a, double delta, double sigma, bool relaxed = false);

// Additive production offset active on [t_on, t_off).
struct PulseWindow {
  double a;
  double t_on;
  double t_off;
};

enum class Direction { Up, Down };
const char* to_string(Direction d);

struct Zero {
  double t;
  Direction dir;
};

// Piecewise-constant production as a function of the delayed state.
// levels[i] applies when exactly i thresholds are <= xi.
struct FeedbackRule {
  std::vector<double> thresholds;
  std::vector<double> levels;

  double operator()(double xi) const;

  static FeedbackRule two_level(const ModelParams& p);
  static FeedbackRule three_level(const ModelParams& p, double xi_star, double beta_star);
  // Dimensional rule for RawParams, threshold theta.
  static FeedbackRule raw(const RawParams& raw);
};

}  // namespace relaydde
