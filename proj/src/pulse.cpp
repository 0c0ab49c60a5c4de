#include "relaydde/pulse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "relaydde/error.hpp"

namespace relaydde {

namespace {

constexpr std::array<const char*, 11> kCaseNames = {"RNRN", "RNRP", "RPRP", "RPFP", "RPFN", "FPFP",
                                                     "FPFN", "FNFP", "FNFN", "FNRN", "FNRP"};

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_delta(const PeriodicOrbit& o, double delta) {
  if (!(delta >= 0 && delta < o.period))
    throw Error(ErrorKind::OutOfDomain, "pulse onset must lie in [0, T~)");
}

}  // namespace

const char* to_string(CaseCode c) { return kCaseNames[static_cast<std::size_t>(c)]; }

std::optional<CaseCode> case_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kCaseNames.size(); ++i)
    if (s == kCaseNames[i]) return static_cast<CaseCode>(i);
  return std::nullopt;
}

bool CycleStats::finite() const { return std::isfinite(T); }

Thresholds thresholds(const PeriodicOrbit& o, double a, double sigma) {
  const double L = o.params.beta_l, U = o.params.beta_u, tau = o.params.tau;
  const double em = -std::expm1(-sigma);  // 1 - e^{-sigma}
  const double ep = std::expm1(sigma);    // e^{sigma} - 1
  Thresholds th{};
  th.delta1 = o.z1 - sigma + std::log(L / (L + a * em));
  // A threshold at rounding distance from zero is the delta1 = 0 scenario, not a sliver of RNRN.
  if (std::abs(th.delta1) <= time_tolerance(o.z1)) th.delta1 = 0.0;
  th.delta1_hat = o.z1 - sigma + std::log(L / (a * em));
  const double den = U - a * em;
  th.delta2 = den > 0 ? o.z2 - sigma + std::log(U / den) : kInf;
  const double ratio = (U + std::sqrt(U * U + 4 * a * U * ep * std::exp(tau))) / (2 * U);
  th.delta_bar = o.period - std::log(ratio);
  th.delta2_beyond_z2 = th.delta2 >= o.z2;
  return th;
}

Thresholds thresholds(const ModelParams& p, double a, double sigma, bool relaxed) {
  validate(p, PulseSpec{a, 0.0, sigma, relaxed});
  return thresholds(periodic_solution(p), a, sigma);
}

CaseCode classify(const PeriodicOrbit& o, const Thresholds& th, double d, double sigma) {
  check_delta(o, d);
  if (d < o.z1) return d < th.delta1 ? CaseCode::RNRN : CaseCode::RNRP;
  if (d <= o.t_max - sigma) return CaseCode::RPRP;
  if (d < o.t_max) return d <= th.delta2 ? CaseCode::RPFP : CaseCode::RPFN;
  if (d <= o.z2) return d <= th.delta2 ? CaseCode::FPFP : CaseCode::FPFN;
  if (d < o.period - sigma) return d <= th.delta2 ? CaseCode::FNFP : CaseCode::FNFN;
  return d < o.period + th.delta1 ? CaseCode::FNRN : CaseCode::FNRP;
}

CaseCode classify(const ModelParams& p, const PulseSpec& pulse) {
  validate(p, pulse);
  auto o = periodic_solution(p);
  return classify(o, thresholds(o, pulse.a, pulse.sigma), pulse.delta, pulse.sigma);
}

int phase_index(const PeriodicOrbit& o, double delta) {
  if (delta < o.z1) return 0;
  if (delta < o.z2) return 1;
  return 2;
}

CycleStats evaluate_case(const PeriodicOrbit& o, const Thresholds& th, const PulseSpec& pulse, CaseCode code) {
  const double L = o.params.beta_l, U = o.params.beta_u, tau = o.params.tau;
  const double a = pulse.a, s = pulse.sigma, D = pulse.delta;
  const double em = -std::expm1(-s), ep = std::expm1(s);
  const double z1 = o.z1, z2 = o.z2, Tt = o.period, tm = o.t_max;
  const double z3 = Tt + z1, z4 = Tt + z2;
  const double et = std::exp(tau), emt = std::exp(-tau);
  const double x_at_end = o(D + s) + a * em;  // x(D + sigma): the pulse only shifts the orbit during [D, D + sigma]

  CycleStats r;
  r.delta = D;
  r.code = code;
  r.x_min = o.x_min;
  r.x_max = o.x_max;

  // Zeros written as e^{z} identities, each relative to the matching orbit zero.
  auto rising_zero_in_pulse = [&](double zt) { return zt + std::log((L + a * std::exp(D - zt)) / (L + a)); };
  auto falling_zero_in_pulse = [&](double zt) { return zt + std::log((U - a * std::exp(D - zt)) / (U - a)); };
  auto falling_after_rising_pulse = [&](double zt_fall, double zt_rise) {
    double gain = a * (L + U) * et / (L + a);
    return zt_fall + std::log1p((gain * (std::exp(D - zt_fall) - std::exp(zt_rise - zt_fall)) +
                                 a * ep * std::exp(D - zt_fall)) / U);
  };
  auto rising_after_falling_pulse = [&](double zt_rise, double zt_fall) {
    double gain = a * (L + U) * et / (U - a);
    return zt_rise + std::log1p(-(gain * (std::exp(D - zt_rise) - std::exp(zt_fall - zt_rise)) +
                                  a * ep * std::exp(D - zt_rise)) / L);
  };
  auto shifted_falling = [&]() { return z2 + std::log1p(a * ep * std::exp(D - z2) / U); };
  auto shifted_rising = [&](double zt) { return zt + std::log1p(-a * ep * std::exp(D - zt) / L); };

  switch (code) {
    case CaseCode::RNRN: {
      double zr = shifted_rising(z1);
      r.J = 0;
      r.T = Tt + (zr - z1);
      r.zeros = {-tau, zr, zr + (z2 - z1)};
      break;
    }
    case CaseCode::RNRP: {
      double zr = rising_zero_in_pulse(z1);
      double zf = falling_after_rising_pulse(z2, z1);
      r.J = 0;
      r.T = zf + tau;
      r.zeros = {-tau, zr, zf};
      double x_peak = L - (L + a) * emt + a * emt * std::exp(s + D - zr);
      r.x_max = std::max(x_at_end, x_peak);
      r.sublabel = D <= th.delta1_hat ? "RNRP1" : "RNRP2";
      break;
    }
    case CaseCode::RPRP:
    case CaseCode::RPFP:
    case CaseCode::FPFP: {
      double zf = shifted_falling();
      r.J = 1;
      r.T = zf + tau;
      r.zeros = {z1, zf, zf + tau + z1};
      if (code == CaseCode::RPRP)
        r.x_max = std::max(x_at_end, o.x_max + a * ep * std::exp(D - tm));
      else if (code == CaseCode::RPFP)
        r.x_max = o.x_max - a * std::expm1(D - tm);
      break;
    }
    case CaseCode::RPFN:
    case CaseCode::FPFN: {
      double zf = falling_zero_in_pulse(z2);
      double zr = rising_after_falling_pulse(z3, z2);
      r.T = zr - z1;
      r.x_min = o.x_min + a * emt * std::expm1(D + s - zf);
      if (code == CaseCode::RPFN) r.x_max = o.x_max - a * std::expm1(D - tm);
      if (D < z2) {
        r.J = 1;
        r.zeros = {z1, zf, zr};
      } else {
        r.J = 2;
        r.zeros = {z2, zr, zr + (z2 - z1)};
      }
      break;
    }
    case CaseCode::FNFN:
    case CaseCode::FNRN: {
      double zr = shifted_rising(z3);
      r.J = 2;
      r.T = zr - z1;
      r.zeros = {z2, zr, zr + (z2 - z1)};
      double lifted = code == CaseCode::FNFN ? o.x_min + a * ep * std::exp(D - Tt) : o.x_min - a * std::expm1(D - Tt);
      r.x_min = std::min(o(D), lifted);
      break;
    }
    case CaseCode::FNRP: {
      double zr = rising_zero_in_pulse(z3);
      double zf = falling_after_rising_pulse(z4, z3);
      r.J = 2;
      r.T = zf - z2;
      r.zeros = {z2, zr, zf};
      r.x_min = std::min(o(D), o.x_min - a * std::expm1(D - Tt));
      r.x_max = std::max(x_at_end, o.x_max + a * emt * std::expm1(s + D - zr));
      break;
    }
    case CaseCode::FNFP:
      throw Error(ErrorKind::StandingHypothesisViolated, "FNFP has no closed form; use the simulated response");
  }
  return r;
}

CycleStats response_closed_form(const PeriodicOrbit& o, const Thresholds& th, const PulseSpec& pulse) {
  validate(o.params, pulse);
  if (pulse.a >= o.params.beta_u)
    throw Error(ErrorKind::StandingHypothesisViolated, "closed forms need a < beta_U; use the simulated response");
  CaseCode code = classify(o, th, pulse.delta, pulse.sigma);
  return evaluate_case(o, th, pulse, code);
}

CycleStats response_closed_form(const ModelParams& p, const PulseSpec& pulse) {
  validate(p, pulse);
  auto o = periodic_solution(p);
  return response_closed_form(o, thresholds(o, pulse.a, pulse.sigma), pulse);
}

Trajectory pulsed_trajectory(const PeriodicOrbit& o, const PulseSpec& pulse, double horizon) {
  return evolve(o.params, o.segment(0.0), horizon, PulseWindow{pulse.a, pulse.delta, pulse.delta + pulse.sigma});
}

namespace {

std::optional<CaseCode> code_from_letters(bool rise0, bool neg0, bool rise1, bool neg1) {
  std::string s;
  s += rise0 ? 'R' : 'F';
  s += neg0 ? 'N' : 'P';
  s += rise1 ? 'R' : 'F';
  s += neg1 ? 'N' : 'P';
  return case_from_string(s);
}

// Extremes of the solution over [a, b], read at arc endpoints since every arc is monotone.
std::pair<double, double> range_on(const Trajectory& traj, double a, double b) {
  double lo = traj(a), hi = lo;
  auto visit = [&](const ExpArc& arc) {
    double s0 = std::max(arc.t_start, a), s1 = std::min(arc.t_end, b);
    if (s1 < s0) return;
    for (double v : {arc(s0), arc(s1)}) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  for (const auto& arc : traj.history.arcs()) visit(arc);
  for (const auto& arc : traj.arcs) visit(arc);
  return {lo, hi};
}

}  // namespace

CycleStats response_simulated(const ModelParams& p, const PulseSpec& pulse) {
  validate(p, pulse);
  const auto o = periodic_solution(p);
  check_delta(o, pulse.delta);
  const auto th = thresholds(o, pulse.a, pulse.sigma);
  const double D = pulse.delta, tau = p.tau;
  const bool standing = pulse.a < p.beta_u;
  const double horizon = D + (standing ? 4.0 : 10.0) * o.period + 2 * tau;
  const Trajectory traj = pulsed_trajectory(o, pulse, horizon);

  CycleStats r;
  r.delta = D;
  r.J = phase_index(o, D);
  const double zJ = o.zero(r.J);
  const Direction dir_J = r.J == 1 ? Direction::Up : Direction::Down;

  const double x0 = traj(D), x1 = traj(D + pulse.sigma);
  const bool rise1 = !(D + pulse.sigma >= o.t_max && D + pulse.sigma < o.period);
  auto letters = code_from_letters(D < o.t_max, x0 < 0, rise1, x1 < 0);
  r.code = letters ? *letters : classify(o, th, D, pulse.sigma);
  if (r.code == CaseCode::RNRP) r.sublabel = D <= th.delta1_hat ? "RNRP1" : "RNRP2";

  // Zeros of the perturbed solution after z~_J (the engine recomputes z~_J itself; skip it).
  std::vector<double> after;
  for (const Zero& z : traj.zeros)
    if (z.t > zJ + 1e-9) after.push_back(z.t);

  double merge_zero = kInf;
  if (auto m = merge_time(traj, o, D + pulse.sigma)) {
    for (const Zero& z : traj.zeros) {
      if (z.t < m->zero - time_tolerance(m->zero)) continue;
      if (z.dir == dir_J) {
        merge_zero = z.t;
        break;
      }
    }
  }

  if (std::isfinite(merge_zero) && merge_zero <= horizon) {
    r.T = merge_zero - zJ;
    r.zeros = {zJ};
    for (double z : after) {
      if (z > merge_zero + time_tolerance(merge_zero)) break;
      r.zeros.push_back(z);
    }
    auto [lo, hi] = range_on(traj, zJ, merge_zero);
    r.x_min = lo;
    r.x_max = hi;
    if (standing && (after.size() < 2 || std::abs(after[1] - merge_zero) > 1e-9)) {
      r.diagnostics = "merge zero differs from the second zero after z~_J";
    }
  } else {
    r.T = kInf;
    auto [lo, hi] = range_on(traj, zJ, horizon);
    r.x_min = lo;
    r.x_max = hi;
    r.zeros = {zJ};
    r.zeros.insert(r.zeros.end(), after.begin(), after.end());
    std::ostringstream msg;
    msg.precision(17);
    msg << "no return to the periodic orbit before t = " << horizon << "; " << after.size()
        << " zeros after z~_J, last ones:";
    std::size_t first = after.size() > 6 ? after.size() - 6 : 0;
    for (std::size_t i = first; i < after.size(); ++i) msg << ' ' << after[i];
    r.diagnostics = msg.str();
  }
  return r;
}

}  // namespace relaydde
