#include "relaydde/three_level.hpp"

#include <cmath>
#include <optional>

#include "relaydde/error.hpp"

namespace relaydde {

double ThreeLevelParams::xi_star() const { return base.beta_l * -std::expm1(-base.tau); }

FeedbackRule ThreeLevelParams::rule() const { return FeedbackRule::three_level(base, xi_star(), beta_star); }

void validate(const ThreeLevelParams& p) {
  require_oscillatory(p.base);
  if (!std::isfinite(p.beta_star)) throw ValidationError(Clause::NotFinite);
  if (!(p.beta_star > p.base.beta_u)) throw ValidationError(Clause::BetaStarAboveBetaUpper);
}

ThreeLevelPulse three_level_pulse(const ThreeLevelParams& p, double a) {
  validate(p);
  if (!(a > 0) || !std::isfinite(a)) throw ValidationError(Clause::AmplitudePositive);
  const double L = p.base.beta_l, U = p.base.beta_u, B = p.beta_star, tau = p.base.tau;
  const double et = std::exp(-tau);
  const auto o = periodic_solution(p.base);
  ThreeLevelPulse r{};
  r.x_at_tmax = (L + a) * -std::expm1(-tau);
  r.exp_z1_minus_tstar = (a + L * et) / (a + L);
  r.t_star = o.z1 - std::log(r.exp_z1_minus_tstar);
  r.x_at_tstar_tau = -U + (r.x_at_tmax + U) * r.exp_z1_minus_tstar;
  r.x_at_z1_2tau = -B + (r.x_at_tstar_tau + B) / r.exp_z1_minus_tstar * et;
  r.x_min_base = o.x_min;
  r.undershoot = r.x_at_z1_2tau < r.x_min_base;
  return r;
}

Trajectory simulate_three_level(const ThreeLevelParams& p, double a, double horizon) {
  validate(p);
  const auto o = periodic_solution(p.base);
  return evolve(p.rule(), o.segment(0.0), horizon, PulseWindow{a, o.z1, o.z1 + p.base.tau});
}

ThreeLevelPulse three_level_simulated(const ThreeLevelParams& p, double a) {
  const auto o = periodic_solution(p.base);
  const double tau = p.base.tau;
  const Trajectory traj = simulate_three_level(p, a, o.z1 + 2 * tau + 1.0);
  std::optional<double> t_star;
  for (const auto& arc : traj.arcs) {
    if (arc.t_end <= o.z1) continue;
    if (auto s = arc_crossing(arc, p.xi_star()); s && *s > o.z1) {
      t_star = *s;
      break;
    }
  }
  if (!t_star) throw Error(ErrorKind::Domain, "pulsed solution never reaches the upper threshold");
  ThreeLevelPulse r{};
  r.x_at_tmax = traj(o.z1 + tau);
  r.t_star = *t_star;
  r.exp_z1_minus_tstar = std::exp(o.z1 - *t_star);
  r.x_at_tstar_tau = traj(*t_star + tau);
  r.x_at_z1_2tau = traj(o.z1 + 2 * tau);
  r.x_min_base = o.x_min;
  r.undershoot = r.x_at_z1_2tau < r.x_min_base;
  return r;
}

UndershootThreshold undershoot_threshold(const ThreeLevelParams& p, double a) {
  validate(p);
  auto gap = [&](double tau) {
    ThreeLevelParams q{{tau, p.base.beta_l, p.base.beta_u}, p.beta_star};
    auto r = three_level_pulse(q, a);
    return r.x_at_z1_2tau - r.x_min_base;
  };
  constexpr int kGrid = 4000;
  const double lo = 1e-3, hi = 1e3;
  double prev_tau = lo, prev_gap = gap(lo);
  for (int i = 1; i <= kGrid; ++i) {
    double t = lo * std::pow(hi / lo, static_cast<double>(i) / kGrid);
    double g = gap(t);
    if (prev_gap >= 0 && g < 0) {
      double a_lo = prev_tau, a_hi = t;
      while (a_hi - a_lo > 1e-13 * a_hi) {
        double mid = 0.5 * (a_lo + a_hi);
        if (mid <= a_lo || mid >= a_hi) break;
        (gap(mid) < 0 ? a_hi : a_lo) = mid;
      }
      UndershootThreshold r{a_hi, a_lo, a_hi, true, {}};
      for (int k = 0; k < 16; ++k) {
        double c = a_hi * (1.0 + 3.0 * k / 15.0);
        r.check_taus.push_back(c);
        if (!(gap(c) < 0)) r.verified = false;
      }
      return r;
    }
    prev_tau = t;
    prev_gap = g;
  }
  throw Error(ErrorKind::NoUndershoot, "no undershoot onset for delays in [1e-3, 1e3]");
}

}  // namespace relaydde
