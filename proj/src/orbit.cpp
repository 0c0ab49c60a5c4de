#include "relaydde/orbit.hpp"

#include <cmath>
#include <vector>

#include "relaydde/error.hpp"

namespace relaydde {

const char* to_string(MergePhase m) { return m == MergePhase::Min ? "Min" : "Max"; }

PeriodicOrbit periodic_solution(const ModelParams& p) {
  require_oscillatory(p);
  const double L = p.beta_l, U = p.beta_u, tau = p.tau;
  const double decay = -std::expm1(-tau);  // 1 - e^{-tau}
  PeriodicOrbit o{};
  o.params = p;
  o.x_min = -U * decay;
  o.x_max = L * decay;
  o.z1 = std::log((L - o.x_min) / L);
  o.z2 = o.z1 + tau + std::log((o.x_max + U) / U);
  o.period = o.z2 + tau;
  o.t_max = o.z1 + tau;
  o.t_min = 0.0;
  o.arcs = {ExpArc{-tau, 0.0, -U, U},
            ExpArc{0.0, o.t_max, L, o.x_min - L},
            ExpArc{o.t_max, o.period, -U, o.x_max + U}};
  return o;
}

double PeriodicOrbit::operator()(double t) const {
  double m = std::floor(t / period);
  double u = t - m * period;
  if (u >= period) u -= period;
  if (u < 0) u += period;
  return u < t_max ? arcs[1](u) : arcs[2](u);
}

double PeriodicOrbit::zero(int j) const {
  int m = j >= 0 ? j / 2 : -((1 - j) / 2);
  int r = j - 2 * m;
  return (r == 0 ? -params.tau : z1) + m * period;
}

History PeriodicOrbit::segment(double t) const {
  const double tau = params.tau;
  std::vector<ExpArc> out;
  double u = t - tau;
  while (t - u > time_tolerance(t)) {
    double m = std::floor(u / period);
    double base = m * period;
    double r = u - base;
    if (r >= period) {
      base += period;
      r -= period;
    }
    bool rising = r < t_max;
    double arc_start = rising ? base : base + t_max;
    double arc_end = rising ? base + t_max : base + period;
    if (arc_end - u <= time_tolerance(u)) {
      u = arc_end;
      continue;
    }
    double c = rising ? params.beta_l : -params.beta_u;
    double k0 = rising ? x_min - params.beta_l : x_max + params.beta_u;
    double end = std::min(arc_end, t);
    out.push_back({u - t, end - t, c, k0 * std::exp(-(u - arc_start))});
    u = end;
  }
  out.front().t_start = -tau;
  out.back().t_end = 0.0;
  return History(tau, std::move(out));
}

namespace {

constexpr double kMergeTol = 1e-10;

// Every arc meeting (a, b) has asymptote c.
bool follows_level(const Trajectory& traj, double a, double b, double c) {
  for (const auto& arc : traj.arcs) {
    if (arc.t_end <= a + time_tolerance(a) || arc.t_start >= b - time_tolerance(b)) continue;
    if (std::abs(arc.c - c) > kMergeTol) return false;
  }
  return true;
}

}  // namespace

std::optional<OrbitMerge> merge_time(const Trajectory& traj, const PeriodicOrbit& orbit, double t_free) {
  const double tau = orbit.params.tau;
  const double L = orbit.params.beta_l, U = orbit.params.beta_u;
  if (traj.horizon < t_free + 2 * orbit.period + 2 * tau - time_tolerance(traj.horizon))
    throw Error(ErrorKind::HorizonExhausted, "trajectory horizon is shorter than the merge window");
  for (const Zero& z : traj.zeros) {
    if (z.t < t_free - time_tolerance(t_free)) continue;
    bool falling = z.dir == Direction::Down;
    double first_level = falling ? -U : L;
    double second_level = falling ? L : -U;
    double second_len = falling ? orbit.t_max : orbit.period - orbit.t_max;
    double mid_value = falling ? orbit.x_min : orbit.x_max;
    double end_value = falling ? orbit.x_max : orbit.x_min;
    double t1 = z.t + tau, t2 = t1 + second_len;
    if (t2 > traj.horizon) return std::nullopt;
    if (!follows_level(traj, z.t, t1, first_level) || !follows_level(traj, t1, t2, second_level)) continue;
    if (std::abs(traj(t1) - mid_value) > kMergeTol || std::abs(traj(t2) - end_value) > kMergeTol) continue;
    return OrbitMerge{z.t, falling ? MergePhase::Min : MergePhase::Max, t1};
  }
  return std::nullopt;
}

}  // namespace relaydde
