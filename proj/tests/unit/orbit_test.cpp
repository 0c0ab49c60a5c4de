#include <cmath>
#include <random>

#include "../support/cases.hpp"
#include "doctest.h"
#include "relaydde/orbit.hpp"

using namespace relaydde;
using testing::P1;
using testing::P2;

TEST_CASE("closed-form orbit values") {
  auto o = periodic_solution(P1);
  CHECK(std::abs(o.x_min - -0.505696447062846) < 1e-14);
  CHECK(std::abs(o.x_max - 0.252848223531423) < 1e-14);
  CHECK(std::abs(o.z1 - 0.817239655402078) < 1e-14);
  CHECK(std::abs(o.z2 - 2.09188229228223) < 1e-13);
  CHECK(std::abs(o.period - 3.09188229228223) < 1e-13);
  CHECK(std::abs(o.t_max - 1.81723965540208) < 1e-13);
  CHECK(o.t_min == 0.0);

  auto q = periodic_solution(P2);
  CHECK(std::abs(q.z1 - 0.308375294155441) < 1e-14);
  CHECK(std::abs(q.z2 - 2.05326588231302) < 1e-13);
  CHECK(std::abs(q.period - 3.05326588231302) < 1e-13);
  CHECK(std::abs(q.x_max - 0.884968782359981) < 1e-14);
  CHECK(std::abs(q.x_min - -0.505696447062846) < 1e-14);

  CHECK_THROWS_AS(periodic_solution({1.0, 0.4, -0.3}), Error);
}

TEST_CASE("zero identity and orbit shape on random parameters") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto p = testing::random_params(rng);
    auto o = periodic_solution(p);
    double lhs = p.beta_l * std::exp(o.z1) + p.beta_u * std::exp(o.z2);
    double rhs = (p.beta_l + p.beta_u) * std::exp(p.tau + o.z1);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
    CHECK(o.z2 - o.z1 > p.tau);
    CHECK(o.x_min < 0);
    CHECK(o.x_max > 0);
    CHECK(std::abs(o(o.z1)) < 1e-14);
    CHECK(std::abs(o(o.z2)) < 1e-14);
    CHECK(o(o.t_max) == doctest::Approx(o.x_max).epsilon(1e-14));
  }
}

TEST_CASE("symmetric levels give a mirrored orbit") {
  ModelParams p{1.7, 0.6, 0.6};
  auto o = periodic_solution(p);
  CHECK(o.x_max == doctest::Approx(-o.x_min).epsilon(1e-15));
  // falling half-wave mirrors rising half-wave
  CHECK(o.z2 - o.t_max == doctest::Approx(o.z1).epsilon(1e-14));
  for (double s : {0.1, 0.5, 1.0, 2.0}) CHECK(o(o.t_max + s) == doctest::Approx(-o(s)).epsilon(1e-13));
}

TEST_CASE("periodicity and extremum placement") {
  for (auto p : {P1, P2}) {
    auto o = periodic_solution(p);
    auto traj = evolve(p, o.segment(0.0), 3 * o.period);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      double t = 2 * o.period * i / 1000.0;
      worst = std::max(worst, std::abs(traj(t) - traj(t + o.period)));
    }
    CHECK(worst <= 1e-12);

    int n = 100000;
    double best = -1e9, arg = 0, lo = 1e9, argl = 0;
    for (int i = 0; i <= n; ++i) {
      double t = o.period * i / n;
      double x = traj(t);
      if (x > best) best = x, arg = t;
      if (x < lo) lo = x, argl = t;
    }
    // corners: sampled extrema are off by at most slope * cell
    double cell = o.period / n, slope = p.beta_l + p.beta_u;
    CHECK(std::abs(best - o.x_max) <= slope * cell);
    CHECK(std::abs(arg - o.t_max) <= cell);
    CHECK(std::abs(lo - o.x_min) <= slope * cell);
    CHECK((argl <= o.period / n || std::abs(argl - o.period) <= o.period / n));
  }
}

TEST_CASE("merge from the constant history") {
  auto o = periodic_solution(P1);
  auto traj = evolve(P1, History::constant(1.0, 1.0), 4 * o.period + 4);
  auto m = merge_time(traj, o);
  REQUIRE(m);
  CHECK(m->phase == MergePhase::Min);
  CHECK(std::abs(m->zero - std::log(2.25)) < 1e-14);
  CHECK(std::abs(m->joined - (std::log(2.25) + 1.0)) < 1e-14);
}

TEST_CASE("merge on the orbit is immediate") {
  auto o = periodic_solution(P2);
  auto traj = evolve(P2, o.segment(0.0), 4 * o.period + 4);
  auto m = merge_time(traj, o);
  REQUIRE(m);
  CHECK(std::abs(m->zero - o.z1) < 1e-12);
  CHECK(m->phase == MergePhase::Max);

  auto from_max = evolve(P2, o.segment(o.t_max), 4 * o.period + 4);
  auto m2 = merge_time(from_max, o);
  REQUIRE(m2);
  CHECK(m2->phase == MergePhase::Min);
  CHECK(std::abs(m2->zero - (o.z2 - o.t_max)) < 1e-12);
}

TEST_CASE("merge universality on random Z0 histories") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    auto p = testing::random_params(rng);
    auto o = periodic_solution(p);
    auto h = testing::random_z0_history(rng, p.tau);
    auto traj = evolve(p, h, 2 * o.period + 3 * p.tau + 2);
    auto m = merge_time(traj, o);
    REQUIRE(m);
    REQUIRE(!traj.zeros.empty());
    const auto& z = traj.zeros.front();
    CHECK(m->joined <= z.t + p.tau + 1e-12);
    CHECK((m->phase == MergePhase::Min) == (z.dir == Direction::Down));
    // the state after the merge is an orbit segment
    double base = m->phase == MergePhase::Min ? o.zero(0) : o.z1;
    for (int k = 0; k <= 50; ++k) {
      double s = o.period * k / 50.0;
      CHECK(std::abs(traj(m->zero + s) - o(base + s)) < 1e-10);
    }
  }
}

TEST_CASE("merge needs enough horizon") {
  auto o = periodic_solution(P1);
  auto traj = evolve(P1, History::constant(1.0, 1.0), 2.0);
  CHECK_THROWS_AS(merge_time(traj, o), Error);
}
