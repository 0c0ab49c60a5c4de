#include <algorithm>
#include <cmath>
#include <random>

#include "../support/cases.hpp"
#include "doctest.h"
#include "relaydde/sweep.hpp"

using namespace relaydde;
using testing::P1;
using testing::P2;
using C = CaseCode;

namespace {

std::vector<C> codes(const std::vector<CaseInterval>& seq) {
  std::vector<C> out;
  for (const auto& iv : seq) out.push_back(iv.code);
  return out;
}

std::vector<C> row_codes(const SweepTable& t) {
  std::vector<C> out;
  for (const auto& r : t.rows)
    if (out.empty() || out.back() != r.code) out.push_back(r.code);
  return out;
}

}  // namespace

TEST_CASE("case sequences at the presets") {
  std::vector<C> s1{C::RNRN, C::RNRP, C::RPRP, C::RPFP, C::RPFN, C::FPFN, C::FNFN, C::FNRN};
  std::vector<C> s2{C::RNRP, C::RPRP, C::RPFP, C::FPFP, C::FPFN, C::FNFN, C::FNRN, C::FNRP};
  CHECK(codes(case_sequence(P1, 0.2, 0.4)) == s1);
  CHECK(codes(case_sequence(P2, 0.2, 0.4)) == s2);
  CHECK(row_codes(cycle_length_map(P1, 0.2, 0.4, 1024)) == s1);
  CHECK(row_codes(cycle_length_map(P2, 0.2, 0.4, 1024)) == s2);
}

TEST_CASE("delta1 = 0 scenario") {
  double a = 0.62820466212474282;
  auto th = thresholds(P1, a, 0.4);
  CHECK(std::abs(th.delta1) < 1e-14);
  auto seq = codes(case_sequence(P1, a, 0.4));
  REQUIRE(!seq.empty());
  CHECK(seq.front() == C::RNRP);
  CHECK(seq.back() == C::FNRN);
}

TEST_CASE("scenario rules on random parameters") {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 300; ++i) {
    auto s = testing::random_pulse_setup(rng);
    auto o = periodic_solution(s.p);
    auto th = thresholds(o, s.a, s.sigma);
    auto ivs = case_sequence(s.p, s.a, s.sigma);
    auto seq = codes(ivs);
    auto has = [&](C c) { return std::find(seq.begin(), seq.end(), c) != seq.end(); };
    CHECK(has(C::RNRP));
    CHECK(has(C::RPRP));
    CHECK(has(C::RPFP));
    CHECK((seq.front() == C::RNRN) == (th.delta1 > 0));
    CHECK((seq.back() == C::FNRN) == (th.delta1 >= 0));
    if (th.delta1 < 0) CHECK(seq.back() == C::FNRP);
    std::vector<C> mid;
    for (auto c : seq)
      if (c == C::RPFN || c == C::FPFP || c == C::FPFN || c == C::FNFN) mid.push_back(c);
    if (th.delta2 < o.t_max)
      CHECK(mid == std::vector<C>{C::RPFN, C::FPFN, C::FNFN});
    else
      CHECK(mid == std::vector<C>{C::FPFP, C::FPFN, C::FNFN});

    // partition of [0, T~)
    REQUIRE(!ivs.empty());
    CHECK(ivs.front().lo == 0.0);
    CHECK(ivs.front().lo_closed);
    CHECK(ivs.back().hi == o.period);
    CHECK_FALSE(ivs.back().hi_closed);
    for (std::size_t k = 1; k < ivs.size(); ++k) {
      CHECK(ivs[k].lo == ivs[k - 1].hi);
      CHECK(ivs[k].lo_closed != ivs[k - 1].hi_closed);
      CHECK(ivs[k].lo < ivs[k].hi);
    }
    // classification agrees with the interval containing each onset
    for (int k = 0; k < 50; ++k) {
      double d = o.period * k / 50;
      int hits = 0;
      for (const auto& iv : ivs)
        if (iv.contains(d)) {
          ++hits;
          CHECK(iv.code == classify(o, th, d, s.sigma));
        }
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("markers appear in order") {
  auto t = cycle_length_map(P1, 0.2, 0.4, 1024);
  std::vector<std::string> want{"delta1", "z1", "tmax_minus_sigma", "delta2", "tmax", "z2", "T_minus_sigma"};
  std::vector<double> vals;
  for (const auto& name : want) {
    auto it = std::find_if(t.markers.begin(), t.markers.end(), [&](const auto& m) { return m.first == name; });
    REQUIRE(it != t.markers.end());
    vals.push_back(it->second);
  }
  CHECK(std::is_sorted(vals.begin(), vals.end()));
  CHECK(std::adjacent_find(vals.begin(), vals.end()) == vals.end());
}

TEST_CASE("table layout") {
  auto t = cycle_length_map(P1, 0.2, 0.4, 64);
  REQUIRE(t.rows.size() == 64);
  CHECK(t.rows.front().delta == 0.0);
  CHECK(t.rows.back().delta < t.orbit.period);
  CHECK(t.left_limit.delta == t.orbit.period);
  CHECK(std::abs(t.left_limit.T - t.rows.back().T) < 0.05);
  CHECK_THROWS_AS(cycle_length_map(P1, 0.2, 0.4, 8), Error);
}

TEST_CASE("zero amplitude table is flat") {
  auto t = cycle_length_map(P1, 1e-12, 0.4, 256);
  for (const auto& r : t.rows) CHECK(std::abs(r.T - t.orbit.period) <= 1e-11);
}

TEST_CASE("monotonicity report passes on the presets") {
  auto r1 = monotonicity_report(cycle_length_map(P1, 0.2, 0.4, 1024));
  CHECK(r1.pass);
  CHECK(r1.layout == "delta2 < t_max");
  auto r2 = monotonicity_report(cycle_length_map(P2, 0.2, 0.4, 1024));
  CHECK(r2.pass);
  CHECK(r2.layout == "delta2 >= t_max");
  // delta_bar inside the FNFN interval
  auto r3 = monotonicity_report(cycle_length_map(P1, 0.6, 0.4, 2048));
  CHECK(r3.pass);
  bool saw = false;
  for (const auto& iv : r3.intervals)
    if (iv.code == C::FNFN)
      for (const auto& c : iv.columns)
        if (c.column == "xmin") saw = c.shape == Shape::IncreasingThenDecreasing;
  CHECK(saw);
}

TEST_CASE("tampered table fails with located cells") {
  auto t = cycle_length_map(P1, 0.2, 0.4, 512);
  for (auto& r : t.rows) r.T = -r.T;
  auto rep = monotonicity_report(t);
  CHECK_FALSE(rep.pass);
  std::size_t located = 0;
  for (const auto& iv : rep.intervals)
    for (const auto& c : iv.columns)
      if (c.column == "T" && !c.pass) located += c.failures.size();
  CHECK(located > 0);
}

TEST_CASE("case boundaries are stable under refinement") {
  for (auto p : {P1, P2}) {
    auto coarse = cycle_length_map(p, 0.2, 0.4, 512);
    auto fine = cycle_length_map(p, 0.2, 0.4, 1024);
    double cell = coarse.orbit.period / 512;
    auto switches = [](const SweepTable& t) {
      std::vector<double> out;
      for (std::size_t i = 1; i < t.rows.size(); ++i)
        if (t.rows[i].code != t.rows[i - 1].code) out.push_back(t.rows[i].delta);
      return out;
    };
    auto a = switches(coarse), b = switches(fine);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < cell);
  }
}

TEST_CASE("simulated sweep rows match") {
  auto t = cycle_length_map(P2, 0.2, 0.4, 128, {true, false});
  REQUIRE(t.simulated_rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].code == t.simulated_rows[i].code);
    CHECK(std::abs(t.rows[i].T - t.simulated_rows[i].T) <= 1e-9);
  }
}
