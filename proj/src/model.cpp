#include "relaydde/model.hpp"

#include <cmath>
#include <stdexcept>

#include "relaydde/error.hpp"

namespace relaydde {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Oscillatory: return "Oscillatory";
    case Regime::GasUpper: return "GasUpper";
    case Regime::GasLower: return "GasLower";
  }
  return "?";
}

const char* to_string(Direction d) { return d == Direction::Up ? "up" : "down"; }

void validate(const RawParams& r) {
  if (!std::isfinite(r.gamma) || !std::isfinite(r.b_l) || !std::isfinite(r.b_u) || !std::isfinite(r.theta) ||
      !std::isfinite(r.tau_raw))
    throw ValidationError(Clause::NotFinite);
  if (!(r.gamma > 0)) throw ValidationError(Clause::GammaPositive);
  if (!(r.theta > 0)) throw ValidationError(Clause::ThetaPositive);
  if (!(r.b_u > 0)) throw ValidationError(Clause::BUpperPositive);
  if (!(r.b_u < r.b_l)) throw ValidationError(Clause::BUpperBelowBLower);
  if (r.b_l == r.gamma * r.theta) throw ValidationError(Clause::BLowerNotDegenerate);
  if (r.b_u == r.gamma * r.theta) throw ValidationError(Clause::BUpperNotDegenerate);
  if (!(r.tau_raw > 0)) throw ValidationError(Clause::TauRawPositive);
}

void validate(const ModelParams& p) {
  if (!std::isfinite(p.tau) || !std::isfinite(p.beta_l) || !std::isfinite(p.beta_u))
    throw ValidationError(Clause::NotFinite);
  if (!(p.tau > 0)) throw ValidationError(Clause::TauPositive);
  if (p.beta_l == 0) throw ValidationError(Clause::BetaLowerNonzero);
  if (p.beta_u == 0) throw ValidationError(Clause::BetaUpperNonzero);
  if (!(p.beta_l + p.beta_u > 0)) throw ValidationError(Clause::BetaSumPositive);
}

ModelParams nondimensionalize(const RawParams& raw) {
  validate(raw);
  ModelParams p{raw.gamma * raw.tau_raw, -raw.theta + raw.b_l / raw.gamma, raw.theta - raw.b_u / raw.gamma};
  validate(p);
  return p;
}

RegimeInfo regime(const ModelParams& p) {
  validate(p);
  if (p.beta_u < 0) return {Regime::GasUpper, -p.beta_u};
  if (p.beta_l < 0) return {Regime::GasLower, p.beta_l};
  return {Regime::Oscillatory, std::nullopt};
}

void require_oscillatory(const ModelParams& p) {
  auto r = regime(p);
  if (r.regime != Regime::Oscillatory)
    throw Error(ErrorKind::Regime, std::string("requires the oscillatory regime, got ") + to_string(r.regime));
}

void validate(const ModelParams& p, const PulseSpec& pulse) {
  validate(p);
  if (!std::isfinite(pulse.a) || !std::isfinite(pulse.delta) || !std::isfinite(pulse.sigma))
    throw ValidationError(Clause::NotFinite);
  if (!(pulse.a > 0)) throw ValidationError(Clause::AmplitudePositive);
  if (!(pulse.sigma > 0 && pulse.sigma <= p.tau)) throw ValidationError(Clause::SigmaRange);
  if (!pulse.relaxed && !(pulse.a < p.beta_u)) throw ValidationError(Clause::AmplitudeBelowBetaUpper);
}

PulseSpec make_pulse(const ModelParams& p, double a, double delta, double sigma, bool relaxed) {
  PulseSpec s{a, delta, sigma, relaxed};
  validate(p, s);
  return s;
}

double FeedbackRule::operator()(double xi) const {
  std::size_t i = 0;
  while (i < thresholds.size() && thresholds[i] <= xi) ++i;
  return levels[i];
}

FeedbackRule FeedbackRule::two_level(const ModelParams& p) { return {{0.0}, {p.beta_l, -p.beta_u}}; }

FeedbackRule FeedbackRule::three_level(const ModelParams& p, double xi_star, double beta_star) {
  if (!(xi_star > 0)) throw Error(ErrorKind::Domain, "upper threshold must be positive");
  return {{0.0, xi_star}, {p.beta_l, -p.beta_u, -beta_star}};
}

FeedbackRule FeedbackRule::raw(const RawParams& r) { return {{r.theta}, {r.b_l, r.b_u}}; }

}  // namespace relaydde
