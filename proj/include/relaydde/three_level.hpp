#pragma once

#include <vector>

#include "relaydde/engine.hpp"
#include "relaydde/model.hpp"
#include "relaydde/orbit.hpp"

namespace relaydde {

// Production drops further, to -beta_star, once the delayed state reaches xi_star = x_max.
struct ThreeLevelParams {
  ModelParams base;
  double beta_star;

  double xi_star() const;
  FeedbackRule rule() const;
};

void validate(const ThreeLevelParams& p);

// Values of the solution after a pulse of height a on [z1~, z1~ + tau].
struct ThreeLevelPulse {
  double x_at_tmax;           // x(z1~ + tau)
  double t_star;              // x reaches xi_star
  double exp_z1_minus_tstar;  // e^{z1~ - t*}
  double x_at_tstar_tau;      // x(t* + tau)
  double x_at_z1_2tau;        // x(z1~ + 2 tau)
  double x_min_base;          // minimum of the unperturbed orbit
  bool undershoot;
};

ThreeLevelPulse three_level_pulse(const ThreeLevelParams& p, double a);
// The same values read off an exact-engine run with the three-level rule.
ThreeLevelPulse three_level_simulated(const ThreeLevelParams& p, double a);
Trajectory simulate_three_level(const ThreeLevelParams& p, double a, double horizon);

struct UndershootThreshold {
  double tau0;
  double bracket_lo;  // no undershoot here
  double bracket_hi;  // undershoot here (= tau0)
  bool verified;      // undershoot at 16 points of [tau0, 4 tau0]
  std::vector<double> check_taus;
};

// Smallest delay (to 1e-6) beyond which x(z1~ + 2 tau) < x_min; the base delay is ignored.
UndershootThreshold undershoot_threshold(const ThreeLevelParams& p, double a);

}  // namespace relaydde
