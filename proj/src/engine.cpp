#include "relaydde/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relaydde/error.hpp"

namespace relaydde {

namespace {

constexpr std::size_t kMaxSteps = 20'000'000;

int sign_of(double v) { return (v > 0) - (v < 0); }

// Index of the arc containing t: the last one whose t_start <= t.
std::size_t locate(const std::vector<ExpArc>& arcs, double t) {
  auto it = std::upper_bound(arcs.begin(), arcs.end(), t,
                             [](double v, const ExpArc& a) { return v < a.t_start; });
  if (it == arcs.begin()) return 0;
  return static_cast<std::size_t>(it - arcs.begin()) - 1;
}

}  // namespace

double ExpArc::operator()(double t) const { return c + k * std::exp(-(t - t_start)); }

double ExpArc::end_value() const { return c + k * std::exp(-(t_end - t_start)); }

ArcRoot arc_zero(const ExpArc& arc) {
  if (arc.c == 0 && arc.k == 0) return {ArcRoot::Status::NonTransversal, 0};
  if (arc.c == 0 || arc.k == 0) return {};
  double r = -arc.k / arc.c;
  if (!(r > 1)) return {};
  double t = arc.t_start + std::log(r);
  if (t <= arc.t_start) return {};
  if (t > arc.t_end) {
    if (t - arc.t_end > time_tolerance(arc.t_end)) return {};
    t = arc.t_end;
  }
  return {ArcRoot::Status::Found, t};
}

std::optional<double> arc_crossing(const ExpArc& arc, double level) {
  double gap = level - arc.c;
  if (arc.k == 0 || gap == 0) return std::nullopt;
  double r = arc.k / gap;
  if (!(r > 1)) return std::nullopt;
  double t = arc.t_start + std::log(r);
  if (t <= arc.t_start) return std::nullopt;
  if (t > arc.t_end) {
    if (t - arc.t_end > time_tolerance(arc.t_end)) return std::nullopt;
    t = arc.t_end;
  }
  return t;
}

History::History(double tau, std::vector<ExpArc> arcs) : tau_(tau), arcs_(std::move(arcs)) {
  if (!(tau > 0) || !std::isfinite(tau)) throw Error(ErrorKind::InvalidHistory, "history delay must be positive");
  if (arcs_.empty()) throw Error(ErrorKind::InvalidHistory, "history needs at least one arc");
  const double span_tol = 1e-12 * std::max(1.0, tau);
  if (std::abs(arcs_.front().t_start + tau) > span_tol || std::abs(arcs_.back().t_end) > span_tol)
    throw Error(ErrorKind::InvalidHistory, "history arcs must cover exactly [-tau, 0]");
  // Snap the outer ends, keeping each arc's function unchanged.
  auto rebase = [](ExpArc& a, double new_start) {
    a.k *= std::exp(-(new_start - a.t_start));
    a.t_start = new_start;
  };
  rebase(arcs_.front(), -tau);
  arcs_.back().t_end = 0.0;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    const ExpArc& a = arcs_[i];
    if (!std::isfinite(a.c) || !std::isfinite(a.k) || !std::isfinite(a.t_start) || !std::isfinite(a.t_end))
      throw Error(ErrorKind::InvalidHistory, "history arc has non-finite data");
    if (!(a.t_end > a.t_start)) throw Error(ErrorKind::InvalidHistory, "history arc has empty span");
    if (a.c == 0 && a.k == 0)
      throw Error(ErrorKind::IdenticallyZeroHistory, "history vanishes on an interval (infinite zero set)");
    if (i + 1 < arcs_.size()) {
      ExpArc& b = arcs_[i + 1];
      if (std::abs(b.t_start - a.t_end) > span_tol)
        throw Error(ErrorKind::InvalidHistory, "history arcs are not contiguous");
      rebase(b, a.t_end);
      double va = a.end_value(), vb = b.start_value();
      if (std::abs(va - vb) > 1e-10 * std::max(1.0, std::abs(va)))
        throw Error(ErrorKind::InvalidHistory, "history is discontinuous at t = " + std::to_string(a.t_end));
    }
  }

  zero_at_start_ = arcs_.front().start_value() == 0;

  // Candidate zero times: analytic arc roots plus junctions where the sign flips or vanishes.
  std::vector<double> cand;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    ArcRoot r = arc_zero(arcs_[i]);
    if (r.found()) cand.push_back(r.t);
    if (i + 1 < arcs_.size()) {
      double va = arcs_[i].end_value(), vb = arcs_[i + 1].start_value();
      if (va == 0 || vb == 0 || sign_of(va) != sign_of(vb)) cand.push_back(arcs_[i].t_end);
    }
  }
  if (arcs_.back().end_value() == 0) cand.push_back(0.0);
  std::sort(cand.begin(), cand.end());
  std::vector<double> uniq;
  for (double z : cand)
    if (uniq.empty() || z - uniq.back() > time_tolerance(z)) uniq.push_back(z);

  for (std::size_t j = 0; j < uniq.size(); ++j) {
    double z = uniq[j];
    if (z >= -time_tolerance(0)) {
      zero_at_end_ = true;
      continue;
    }
    double left = j > 0 ? uniq[j - 1] : -tau;
    double right = j + 1 < uniq.size() ? uniq[j + 1] : 0.0;
    // Arcs are monotone, so the sign on each side is read at a point between neighbouring breakpoints.
    const ExpArc& al = arcs_[locate(arcs_, std::nextafter(z, -1e300))];
    const ExpArc& ar = arcs_[locate(arcs_, z)];
    double pl = 0.5 * (std::max(left, al.t_start) + z);
    double pr = 0.5 * (z + std::min(right, ar.t_end));
    int sl = sign_of((*this)(pl)), sr = sign_of((*this)(pr));
    if (sl != 0 && sr != 0 && sl != sr) {
      zeros_.push_back({z, sr > 0 ? Direction::Up : Direction::Down});
    } else {
      ++touching_;
    }
  }
}

History History::constant(double tau, double value) { return History(tau, {ExpArc{-tau, 0.0, value, 0.0}}); }

double History::operator()(double s) const { return arcs_[locate(arcs_, s)](s); }

bool History::in_z0() const {
  int count = static_cast<int>(zeros_.size()) + touching_ + (zero_at_start_ ? 1 : 0) + (zero_at_end_ ? 1 : 0);
  return count == 0 || (count == 1 && zeros_.size() == 1);
}

const ExpArc& Trajectory::arc_at(double t) const {
  if (t < 0 || arcs.empty()) return history.arcs()[locate(history.arcs(), t)];
  return arcs[locate(arcs, t)];
}

double Trajectory::operator()(double t) const { return arc_at(t)(t); }

History Trajectory::segment_at(double t) const {
  const double tau = history.tau();
  if (t < 0 || t > horizon + time_tolerance(horizon))
    throw Error(ErrorKind::OutOfDomain, "segment time outside [0, horizon]");
  std::vector<ExpArc> out;
  auto take = [&](const ExpArc& a) {
    double s0 = std::max(a.t_start, t - tau), s1 = std::min(a.t_end, t);
    if (!(s1 > s0)) return;
    out.push_back({s0 - t, s1 - t, a.c, a.k * std::exp(-(s0 - a.t_start))});
  };
  for (const auto& a : history.arcs()) take(a);
  for (const auto& a : arcs) take(a);
  out.front().t_start = -tau;
  out.back().t_end = 0.0;
  return History(tau, std::move(out));
}

Trajectory evolve(const FeedbackRule& rule, const History& history, double horizon, std::optional<PulseWindow> pulse) {
  if (!(horizon > 0) || !std::isfinite(horizon)) throw Error(ErrorKind::Domain, "horizon must be positive");
  if (rule.levels.size() != rule.thresholds.size() + 1 || !std::is_sorted(rule.thresholds.begin(), rule.thresholds.end()))
    throw Error(ErrorKind::Domain, "feedback rule needs sorted thresholds and one more level than thresholds");
  std::vector<double> edges;
  if (pulse) {
    if (!(pulse->t_on < pulse->t_off)) throw Error(ErrorKind::Domain, "pulse window must have t_on < t_off");
    edges = {pulse->t_on, pulse->t_off};
  }

  const double tau = history.tau();
  std::vector<ExpArc> chain = history.arcs();
  const std::size_t n_hist = chain.size();
  std::vector<Zero> zeros;

  auto value_at = [&](double s) { return chain[locate(chain, s)](s); };

  double t = 0.0;
  double x = chain.back().end_value();
  std::size_t scan = 0;
  std::size_t steps = 0;

  while (t < horizon) {
    if (++steps > kMaxSteps) throw Error(ErrorKind::HorizonExhausted, "event limit reached before the horizon");
    const double tol = time_tolerance(t);
    const double lo = t - tau + tol;
    while (scan < chain.size() && chain[scan].t_end <= lo) ++scan;

    double next = std::min(horizon, t + tau);

    // Earliest threshold crossing of the delayed state in (t - tau, t].
    for (std::size_t i = scan; i < chain.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (double th : rule.thresholds) {
        auto s = arc_crossing(chain[i], th);
        if (s && *s > lo && *s <= t) best = std::min(best, *s);
      }
      if (std::isfinite(best)) {
        next = std::min(next, best + tau);
        break;
      }
    }

    // Pulse edges win ties with delayed events.
    for (double e : edges) {
      if (e > t + tol && e <= next + time_tolerance(e)) {
        next = e;
        break;
      }
    }
    if (next > horizon || horizon - next <= time_tolerance(horizon)) next = horizon;

    const double mid = 0.5 * (t + next);
    double level = rule(value_at(mid - tau));
    if (pulse && mid >= pulse->t_on && mid < pulse->t_off) level += pulse->a;

    ExpArc piece{t, next, level, x - level};
    ArcRoot root = arc_zero(piece);
    if (root.status == ArcRoot::Status::NonTransversal)
      throw Error(ErrorKind::NonTransversal, "solution became identically zero");
    if (root.found()) {
      double z = root.t;
      if (next - z <= time_tolerance(next)) z = next;
      if (zeros.empty() || z - zeros.back().t > time_tolerance(z))
        zeros.push_back({z, piece.k > 0 ? Direction::Down : Direction::Up});
    }

    if (chain.size() > n_hist && chain.back().c == level) {
      chain.back().t_end = next;
    } else {
      chain.push_back(piece);
    }
    x = chain.back().end_value();
    t = next;
  }

  Trajectory out{history, {}, std::move(zeros), horizon};
  out.arcs.assign(chain.begin() + static_cast<std::ptrdiff_t>(n_hist), chain.end());
  return out;
}

Trajectory evolve(const ModelParams& p, const History& history, double horizon, std::optional<PulseWindow> pulse) {
  validate(p);
  if (std::abs(history.tau() - p.tau) > 1e-12 * std::max(1.0, p.tau))
    throw Error(ErrorKind::InvalidHistory, "history delay does not match the model delay");
  return evolve(FeedbackRule::two_level(p), history, horizon, pulse);
}

const std::vector<Zero>& zeros_of(const Trajectory& traj) { return traj.zeros; }

}  // namespace relaydde
