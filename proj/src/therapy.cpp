#include "relaydde/therapy.hpp"

#include <algorithm>
#include <cmath>

#include "relaydde/error.hpp"

namespace relaydde {

CriticalCrossing predict_t_d(const ModelParams& p, double phi0, double x_d) {
  const auto o = periodic_solution(p);
  if (!(phi0 > 0)) throw Error(ErrorKind::Domain, "phi(0) must be positive");
  if (!(x_d > o.x_min && x_d < 0)) throw Error(ErrorKind::Domain, "critical level must satisfy x_min < x_d < 0");
  const double U = p.beta_u;
  double z1 = std::log((phi0 + U) / U);
  return {z1, z1 + std::log(U / (x_d + U))};
}

TherapyPlan plan(const TherapyInput& in) {
  const auto& p = in.params;
  const auto o = periodic_solution(p);
  if (!(in.sigma > 0 && in.sigma <= p.tau)) throw ValidationError(Clause::SigmaRange);
  for (std::size_t i = 0; i < in.history.arcs().size(); ++i) {
    const auto& arc = in.history.arcs()[i];
    // phi(-tau) may be zero, up to rounding
    bool start_ok = i == 0 ? arc.start_value() >= -1e-12 : arc.start_value() > 0;
    if (!start_ok || !(arc.end_value() > 0)) throw Error(ErrorKind::Domain, "history must be positive on (-tau, 0]");
  }
  const double phi0 = in.history(0.0);
  const double U = p.beta_u, L = p.beta_l, tau = p.tau, x_d = in.x_d;
  const auto cross = predict_t_d(p, phi0, x_d);

  TherapyPlan r{};
  r.phi0 = phi0;
  r.q = std::min(1.0, phi0 / o.x_max);
  r.z1 = cross.z1;
  r.t_d = cross.t_d;
  r.t_m = cross.t_d - tau - in.sigma;
  const double em = -std::expm1(-in.sigma);
  const double lhs = (x_d - o.x_min) * std::exp(tau) * (x_d + U);
  r.a_d = lhs / (U * em);
  r.checks.t_m_positive = r.t_m > 0;
  r.checks.sigma_window = r.z1 < r.t_d - in.sigma;
  r.checks.x_d_negative = x_d + r.a_d * em < 0;
  r.checks.amplitude = lhs < -U * x_d;
  r.feasible = r.checks.t_m_positive && r.checks.sigma_window && r.checks.x_d_negative && r.checks.amplitude;
  r.tau_before_t_d = tau < r.t_d;
  // From the lifted minimum x_d the solution rises through zero, then repeats the orbit's last stretch.
  r.predicted_period = r.z1 + tau + std::log((L - x_d) / L) + tau;
  return r;
}

History canonical_history(const PeriodicOrbit& orbit) { return orbit.segment(orbit.t_max); }

TreatmentResult simulate_treatment(const TherapyInput& in, const TherapyPlan& pl, double amplitude) {
  const auto& p = in.params;
  const auto o = periodic_solution(p);
  const double horizon = pl.t_d + 2 * o.period + 2 * p.tau;
  TreatmentResult r{evolve(p, in.history, horizon, PulseWindow{amplitude, pl.t_d - in.sigma, pl.t_d}), 0, 0, 0, 0};
  const auto& zs = r.trajectory.zeros;
  if (zs.size() < 2) throw Error(ErrorKind::HorizonExhausted, "treated solution has fewer than two zeros");
  const double z1 = zs[0].t, z2 = zs[1].t, end = z2 + p.tau;
  r.achieved_min = r.trajectory(z1 + p.tau);
  r.achieved_period = end;
  double lo = r.trajectory(0.0);
  for (const auto& arc : r.trajectory.arcs) {
    if (arc.t_start >= end) break;
    lo = std::min({lo, arc(arc.t_start), arc(std::min(arc.t_end, end))});
  }
  r.cycle_min = lo;
  const History seg = r.trajectory.segment_at(end);
  double err = 0;
  for (int i = 0; i <= 400; ++i) {
    double s = -p.tau + p.tau * i / 400.0;
    err = std::max(err, std::abs(seg(s) - in.history(s)));
  }
  r.periodicity_error = err;
  return r;
}

TreatmentResult apply_plan(const TherapyInput& in, const TherapyPlan& pl) {
  if (!pl.feasible) throw Error(ErrorKind::PlanInfeasible, "plan fails at least one feasibility check");
  return simulate_treatment(in, pl, pl.a_d);
}

}  // namespace relaydde
