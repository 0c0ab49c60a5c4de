#include "relaydde/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "relaydde/error.hpp"

namespace relaydde {

double DenseTrajectory::operator()(double t) const {
  double u = (t - t0) / h;
  if (u <= 0) return x.front();
  auto i = static_cast<std::size_t>(u);
  if (i + 1 >= x.size()) return x.back();
  double f = u - static_cast<double>(i);
  return x[i] + f * (x[i + 1] - x[i]);
}

double Comparison::max_zero_dev() const {
  double m = 0;
  for (double d : zero_time_devs) m = std::max(m, d);
  return m;
}

namespace {

// Root of the segment from (0, ya) to (1, yb) at level y, by bisection.
double bisect_linear(double ya, double yb, double y, double scale) {
  double lo = 0, hi = 1;
  bool lo_below = ya < y;
  while ((hi - lo) * scale > 1e-12) {
    double mid = 0.5 * (lo + hi);
    double v = ya + mid * (yb - ya);
    if ((v < y) == lo_below) lo = mid; else hi = mid;
    if (hi - lo < 1e-16) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DenseTrajectory integrate_dense(const DenseProblem& pr, double h) {
  if (!(pr.tau > 0) || !(pr.horizon > 0)) throw Error(ErrorKind::Domain, "delay and horizon must be positive");
  if (!(h > 0) || h > pr.tau / 100 * (1 + 1e-12))
    throw Error(ErrorKind::StepTooLarge, "oracle step must satisfy 0 < h <= tau/100");
  const auto m = static_cast<std::size_t>(std::ceil(pr.tau / h - 1e-9));
  const double hh = pr.tau / static_cast<double>(m);
  const auto k = static_cast<std::size_t>(std::ceil(pr.horizon / hh - 1e-9));

  DenseTrajectory out{-pr.tau, hh, pr.tau, {}, {}};
  out.x.resize(m + k + 1);
  for (std::size_t i = 0; i <= m; ++i) out.x[i] = pr.history(i == m ? 0.0 : out.time(i));

  const double g = pr.decay;
  auto rk4 = [g](double x, double f, double dt) {
    auto rhs = [&](double y) { return -g * y + f; };
    double k1 = rhs(x);
    double k2 = rhs(x + 0.5 * dt * k1);
    double k3 = rhs(x + 0.5 * dt * k2);
    double k4 = rhs(x + dt * k3);
    return x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  };

  std::vector<double> cuts;
  for (std::size_t i = m; i < m + k; ++i) {
    const double t = out.time(i);
    // The delayed window [t - tau, t + h - tau] is exactly the sample interval [i - m, i - m + 1].
    const double ya = out.x[i - m], yb = out.x[i - m + 1];
    cuts.assign({0.0, 1.0});
    for (double th : pr.rule.thresholds)
      if ((ya < th) != (yb < th)) cuts.push_back(bisect_linear(ya, yb, th, hh));
    if (pr.pulse) {
      for (double e : {pr.pulse->t_on, pr.pulse->t_off}) {
        double u = (e - t) / hh;
        if (u > 0 && u < 1) cuts.push_back(u);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    double x = out.x[i];
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      double ua = cuts[c], ub = cuts[c + 1];
      if (ub <= ua) continue;
      double um = 0.5 * (ua + ub);
      double f = pr.rule(ya + um * (yb - ya));
      double tm = t + um * hh;
      if (pr.pulse && tm >= pr.pulse->t_on && tm < pr.pulse->t_off) f += pr.pulse->a;
      x = rk4(x, f, (ub - ua) * hh);
    }
    out.x[i + 1] = x;
  }

  for (std::size_t i = m; i + 1 < out.x.size(); ++i) {
    double a = out.x[i], b = out.x[i + 1];
    if (a == 0 && i > m && out.x[i - 1] * b < 0) {
      out.zeros.push_back({out.time(i), b > 0 ? Direction::Up : Direction::Down});
    } else if (a * b < 0) {
      double u = bisect_linear(a, b, 0.0, hh);
      out.zeros.push_back({out.time(i) + u * hh, b > a ? Direction::Up : Direction::Down});
    }
  }
  return out;
}

DenseTrajectory integrate_dense(const ModelParams& p, std::function<double(double)> history, double horizon,
                                std::optional<PulseWindow> pulse, double h) {
  validate(p);
  return integrate_dense(DenseProblem{FeedbackRule::two_level(p), p.tau, std::move(history), horizon, pulse, 1.0}, h);
}

Comparison compare(const Trajectory& exact, const DenseTrajectory& dense) {
  const double tau = exact.tau();
  if (std::abs(dense.tau - tau) > 1e-12 * std::max(1.0, tau) ||
      dense.t_end() < exact.horizon - 1e-9 || dense.t_end() > exact.horizon + dense.h * (1 + 1e-9))
    throw Error(ErrorKind::MismatchedExperiment, "exact and dense runs cover different time spans");
  Comparison c{0, {}, exact.zeros.size(), 0};
  for (std::size_t i = 0; i < dense.x.size(); ++i) {
    double t = dense.time(i);
    if (t > exact.horizon) break;
    c.max_abs_dev = std::max(c.max_abs_dev, std::abs(exact(t) - dense.x[i]));
  }
  std::vector<double> dz;
  for (const auto& z : dense.zeros)
    if (z.t <= exact.horizon) dz.push_back(z.t);
  c.dense_zeros = dz.size();
  for (std::size_t j = 0; j < std::min(dz.size(), exact.zeros.size()); ++j)
    c.zero_time_devs.push_back(std::abs(dz[j] - exact.zeros[j].t));
  return c;
}

}  // namespace relaydde
