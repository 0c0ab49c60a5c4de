#pragma once

#include "relaydde/engine.hpp"
#include "relaydde/model.hpp"
#include "relaydde/orbit.hpp"

namespace relaydde {

struct TherapyInput {
  ModelParams params;
  double sigma;  // release window length
  double x_d;    // critical level, x_min < x_d < 0
  History history;  // positive on (-tau, 0]
};

struct CriticalCrossing {
  double z1;   // first zero of the untreated solution
  double t_d;  // untreated solution reaches x_d
};

struct TherapyChecks {
  bool t_m_positive;   // medication time t_M > 0
  bool sigma_window;   // z1 < t_d - sigma
  bool x_d_negative;   // x_d + a_d (1 - e^{-sigma}) < 0
  bool amplitude;      // (x_d - x_min) e^tau (x_d + beta_U) < -beta_U x_d
};

struct TherapyPlan {
  double phi0;
  double q;  // largest admissible q in q * x_max < phi0, capped at 1
  double z1;
  double t_d;
  double t_m;
  double a_d;
  TherapyChecks checks;
  bool feasible;
  bool tau_before_t_d;  // weaker alternative to t_M > 0, recorded only
  double predicted_period;
};

struct TreatmentResult {
  Trajectory trajectory;
  double achieved_min;      // x(z1 + tau)
  double cycle_min;         // minimum over [0, z2 + tau]
  double achieved_period;   // z2 + tau
  double periodicity_error; // max |x(z2 + tau + s) - phi(s)| on [-tau, 0]
};

CriticalCrossing predict_t_d(const ModelParams& p, double phi0, double x_d);
TherapyPlan plan(const TherapyInput& input);

// Requires a feasible plan (PlanInfeasible otherwise).
TreatmentResult apply_plan(const TherapyInput& input, const TherapyPlan& plan);
// Same simulation with an arbitrary amplitude on [t_d - sigma, t_d]; no feasibility gate.
TreatmentResult simulate_treatment(const TherapyInput& input, const TherapyPlan& plan, double amplitude);

// The canonical history: the orbit segment ending at its maximum.
History canonical_history(const PeriodicOrbit& orbit);

}  // namespace relaydde
