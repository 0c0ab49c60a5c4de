#include <cmath>
#include <random>

#include "doctest.h"
#include "relaydde/engine.hpp"
#include "relaydde/error.hpp"
#include "relaydde/model.hpp"
#include "relaydde/oracle.hpp"

using namespace relaydde;

namespace {

Clause clause_of(auto&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.clause();
  }
  FAIL("no validation error");
  return Clause::NotFinite;
}

}  // namespace

TEST_CASE("nondimensionalize maps raw parameters") {
  auto p = nondimensionalize({1.0, 1.4, 0.2, 1.0, 1.0});
  CHECK(p.tau == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.beta_l == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(p.beta_u == doctest::Approx(0.8).epsilon(1e-15));

  p = nondimensionalize({2.0, 5.0, 0.5, 0.5, 0.75});
  CHECK(p.tau == 1.5);
  CHECK(p.beta_l == doctest::Approx(2.0));
  CHECK(p.beta_u == doctest::Approx(0.25));
}

TEST_CASE("raw validation names the violated clause") {
  CHECK(clause_of([] { nondimensionalize({2.0, 2.0, 0.0, 0.5, 1.0}); }) == Clause::BUpperPositive);
  CHECK(clause_of([] { nondimensionalize({1.0, 1.0, 0.5, 1.0, 3.0}); }) == Clause::BLowerNotDegenerate);
  CHECK(clause_of([] { nondimensionalize({1.0, 2.0, 1.0, 1.0, 3.0}); }) == Clause::BUpperNotDegenerate);
  CHECK(clause_of([] { nondimensionalize({0.0, 2.0, 1.0, 1.0, 3.0}); }) == Clause::GammaPositive);
  CHECK(clause_of([] { nondimensionalize({1.0, 2.0, 1.0, -1.0, 3.0}); }) == Clause::ThetaPositive);
  CHECK(clause_of([] { nondimensionalize({1.0, 1.0, 2.0, 1.5, 3.0}); }) == Clause::BUpperBelowBLower);
  CHECK(clause_of([] { nondimensionalize({1.0, 2.0, 0.5, 1.0, 0.0}); }) == Clause::TauRawPositive);
  CHECK(clause_of([] { nondimensionalize({NAN, 2.0, 0.5, 1.0, 1.0}); }) == Clause::NotFinite);
}

TEST_CASE("model validation names the violated clause") {
  CHECK(clause_of([] { validate(ModelParams{0.0, 0.4, 0.8}); }) == Clause::TauPositive);
  CHECK(clause_of([] { validate(ModelParams{1.0, 0.0, 0.8}); }) == Clause::BetaLowerNonzero);
  CHECK(clause_of([] { validate(ModelParams{1.0, 0.4, 0.0}); }) == Clause::BetaUpperNonzero);
  CHECK(clause_of([] { validate(ModelParams{1.0, -0.5, 0.4}); }) == Clause::BetaSumPositive);
  ModelParams p{1.0, 0.4, 0.8};
  CHECK(clause_of([&] { make_pulse(p, 0.0, 0.1, 0.4); }) == Clause::AmplitudePositive);
  CHECK(clause_of([&] { make_pulse(p, 0.2, 0.1, 1.5); }) == Clause::SigmaRange);
  CHECK(clause_of([&] { make_pulse(p, 0.8, 0.1, 0.4); }) == Clause::AmplitudeBelowBetaUpper);
  CHECK_NOTHROW(make_pulse(p, 0.8, 0.1, 0.4, true));
}

TEST_CASE("regime follows the level signs") {
  CHECK(regime({1.0, 0.4, 0.8}).regime == Regime::Oscillatory);
  auto up = regime({1.0, 0.4, -0.3});
  CHECK(up.regime == Regime::GasUpper);
  CHECK(*up.equilibrium == doctest::Approx(0.3));
  auto low = regime({2.0, -0.1, 0.5});
  CHECK(low.regime == Regime::GasLower);
  CHECK(*low.equilibrium == doctest::Approx(-0.1));
  CHECK_THROWS_AS(require_oscillatory({1.0, 0.4, -0.3}), Error);
}

TEST_CASE("nondimensional output always has a positive level sum") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 500; ++i) {
    RawParams r{u(rng), u(rng), u(rng), u(rng), u(rng)};
    if (r.b_u > r.b_l) std::swap(r.b_u, r.b_l);
    if (r.b_u == r.b_l) continue;
    auto p = nondimensionalize(r);
    CHECK(p.beta_l + p.beta_u > 0);
  }
}

TEST_CASE("raw model round trip through the oracle") {
  // x_hat(t) = x(t / gamma) - theta solves the nondimensional system.
  RawParams raw{2.0, 3.0, 0.4, 1.0, 0.5};
  auto p = nondimensionalize(raw);
  REQUIRE(regime(p).regime == Regime::Oscillatory);
  double horizon_hat = 8.0;
  auto exact = evolve(p, History::constant(p.tau, 1.0), horizon_hat);

  DenseProblem prob{FeedbackRule::raw(raw), raw.tau_raw, [&](double) { return raw.theta + 1.0; },
                    horizon_hat / raw.gamma, std::nullopt, raw.gamma};
  auto dense = integrate_dense(prob, 1e-4);
  double worst = 0;
  for (int i = 0; i <= 800; ++i) {
    double t_hat = horizon_hat * i / 800;
    worst = std::max(worst, std::abs(dense(t_hat / raw.gamma) - raw.theta - exact(t_hat)));
  }
  CHECK(worst < 1e-5);
}
