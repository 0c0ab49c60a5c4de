#include "relaydde/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaydde/error.hpp"

namespace relaydde {

bool CaseInterval::contains(double d) const {
  bool left = lo_closed ? d >= lo : d > lo;
  bool right = hi_closed ? d <= hi : d < hi;
  return left && right;
}

std::vector<CaseInterval> case_intervals(const PeriodicOrbit& o, const Thresholds& th, double sigma) {
  const double d1 = th.delta1, d2 = th.delta2, tm = o.t_max, z1 = o.z1, z2 = o.z2, T = o.period;
  std::vector<CaseInterval> out;
  auto add = [&](CaseCode c, double lo, bool lc, double hi, bool hc) {
    bool empty = lo > hi || (lo == hi && !(lc && hc));
    if (!empty) out.push_back({c, lo, hi, lc, hc});
  };
  if (d1 > 0) add(CaseCode::RNRN, 0.0, true, d1, false);
  add(CaseCode::RNRP, std::max(0.0, d1), true, z1, false);
  add(CaseCode::RPRP, z1, true, tm - sigma, true);
  // Onset exactly at t_max is already falling.
  if (d2 < tm)
    add(CaseCode::RPFP, tm - sigma, false, d2, true);
  else
    add(CaseCode::RPFP, tm - sigma, false, tm, false);
  add(CaseCode::RPFN, std::max(tm - sigma, d2), false, tm, false);
  if (d2 >= tm) add(CaseCode::FPFP, tm, true, std::min(d2, z2), true);
  if (d2 < tm)
    add(CaseCode::FPFN, tm, true, z2, true);
  else
    add(CaseCode::FPFN, d2, false, z2, true);
  if (d2 > z2) {
    if (d2 < T - sigma)
      add(CaseCode::FNFP, z2, false, d2, true);
    else
      add(CaseCode::FNFP, z2, false, T - sigma, false);
  }
  add(CaseCode::FNFN, std::max(z2, d2), false, T - sigma, false);
  add(CaseCode::FNRN, T - sigma, true, std::min(T, T + d1), false);
  add(CaseCode::FNRP, T + d1, true, T, false);
  return out;
}

std::vector<CaseInterval> case_sequence(const ModelParams& p, double a, double sigma, bool relaxed) {
  auto o = periodic_solution(p);
  return case_intervals(o, thresholds(p, a, sigma, relaxed), sigma);
}

SweepTable cycle_length_map(const ModelParams& p, double a, double sigma, int n, SweepOptions opts) {
  if (n < 16) throw Error(ErrorKind::Domain, "sweep grid needs at least 16 points");
  validate(p, PulseSpec{a, 0.0, sigma, opts.relaxed});
  SweepTable t{p, a, sigma, n, periodic_solution(p), {}, {}, {}, {}, {}, {}};
  t.th = thresholds(t.orbit, a, sigma);
  t.intervals = case_intervals(t.orbit, t.th, sigma);
  t.markers = {{"delta1", t.th.delta1},         {"z1", t.orbit.z1},  {"tmax_minus_sigma", t.orbit.t_max - sigma},
               {"delta2", t.th.delta2},         {"tmax", t.orbit.t_max}, {"z2", t.orbit.z2},
               {"T_minus_sigma", t.orbit.period - sigma}, {"delta1_hat", t.th.delta1_hat},
               {"delta_bar", t.th.delta_bar},   {"T", t.orbit.period}};

  const bool closed = a < p.beta_u;
  t.rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    PulseSpec pulse{a, i * t.orbit.period / n, sigma, opts.relaxed};
    if (closed) {
      t.rows.push_back(response_closed_form(t.orbit, t.th, pulse));
    } else {
      t.rows.push_back(response_simulated(p, pulse));
    }
    if (opts.simulate) t.simulated_rows.push_back(closed ? response_simulated(p, pulse) : t.rows.back());
  }
  if (closed) {
    PulseSpec end{a, t.orbit.period, sigma, opts.relaxed};
    t.left_limit = evaluate_case(t.orbit, t.th, end, t.intervals.back().code);
  } else {
    t.left_limit = t.rows.back();
    t.left_limit.diagnostics = "no closed form for a >= beta_U; last grid row reported";
  }
  return t;
}

const char* to_string(Shape s) {
  switch (s) {
    case Shape::Unchanged: return "unchanged";
    case Shape::Increasing: return "increasing";
    case Shape::Decreasing: return "decreasing";
    case Shape::IncreasingThenDecreasing: return "increasing-then-decreasing";
    case Shape::Mixed: return "mixed";
    case Shape::TooShort: return "too-short";
  }
  return "?";
}

const char* to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "equal";
    case Relation::Above: return "above";
    case Relation::Below: return "below";
    case Relation::Mixed: return "mixed";
  }
  return "?";
}

namespace {

constexpr double kStepTol = 1e-12;

enum class Want { Any, Unchanged, Increasing, Decreasing, IncDec, IncOrIncDec };
enum class Side { Any, Above, Below };

struct CellRule {
  Side side;
  Want want;
};

struct CaseRule {
  CellRule xmin, xmax, T;
};

constexpr CellRule kU{Side::Any, Want::Unchanged};

CaseRule rule_for(CaseCode c) {
  switch (c) {
    case CaseCode::RNRN: return {kU, kU, {Side::Below, Want::Decreasing}};
    case CaseCode::RNRP: return {kU, {Side::Above, Want::Increasing}, {Side::Any, Want::Increasing}};
    case CaseCode::RPRP: return {kU, {Side::Above, Want::Increasing}, {Side::Above, Want::Increasing}};
    case CaseCode::RPFP: return {kU, {Side::Above, Want::Decreasing}, {Side::Above, Want::Increasing}};
    case CaseCode::RPFN:
      return {{Side::Above, Want::Increasing}, {Side::Above, Want::Decreasing}, {Side::Any, Want::Decreasing}};
    case CaseCode::FPFP: return {kU, kU, {Side::Above, Want::Increasing}};
    case CaseCode::FPFN: return {{Side::Above, Want::Increasing}, kU, {Side::Any, Want::Decreasing}};
    case CaseCode::FNFN: return {{Side::Above, Want::IncOrIncDec}, kU, {Side::Below, Want::Decreasing}};
    case CaseCode::FNRN: return {{Side::Above, Want::Decreasing}, kU, {Side::Below, Want::Decreasing}};
    case CaseCode::FNRP:
      return {{Side::Above, Want::Decreasing}, {Side::Above, Want::Increasing}, {Side::Any, Want::Increasing}};
    case CaseCode::FNFP: return {{Side::Any, Want::Any}, {Side::Any, Want::Any}, {Side::Any, Want::Any}};
  }
  return {};
}

const char* describe(Want w) {
  switch (w) {
    case Want::Any: return "";
    case Want::Unchanged: return "unchanged";
    case Want::Increasing: return "increasing";
    case Want::Decreasing: return "decreasing";
    case Want::IncDec: return "increasing-then-decreasing";
    case Want::IncOrIncDec: return "increasing";
  }
  return "";
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

ColumnVerdict judge(const std::string& name, const std::vector<double>& delta, const std::vector<double>& v,
                    std::size_t first, double base, CellRule rule) {
  ColumnVerdict out{name, Shape::Mixed, Relation::Mixed, "", true, {}};
  const std::size_t n = v.size();

  bool all_equal = std::all_of(v.begin(), v.end(), [&](double x) { return x == base; });
  bool all_above = std::all_of(v.begin(), v.end(), [&](double x) { return x > base; });
  bool all_below = std::all_of(v.begin(), v.end(), [&](double x) { return x < base; });
  out.relation = all_equal ? Relation::Equal : all_above ? Relation::Above : all_below ? Relation::Below : Relation::Mixed;

  // Step pattern: runs of up (+1), down (-1), flat (0).
  std::vector<int> steps;
  for (std::size_t i = 1; i < n; ++i) {
    double d = v[i] - v[i - 1];
    steps.push_back(d > kStepTol ? 1 : d < -kStepTol ? -1 : 0);
  }
  if (all_equal) {
    out.shape = Shape::Unchanged;
  } else if (n < 2) {
    out.shape = Shape::TooShort;
  } else {
    std::size_t ups = 0;
    while (ups < steps.size() && steps[ups] == 1) ++ups;
    std::size_t downs = ups;
    while (downs < steps.size() && steps[downs] == -1) ++downs;
    if (downs == steps.size()) {
      out.shape = ups == steps.size() ? Shape::Increasing : ups == 0 ? Shape::Decreasing : Shape::IncreasingThenDecreasing;
    }
  }

  std::string expect;
  if (rule.side == Side::Above) expect = "above";
  if (rule.side == Side::Below) expect = "below";
  if (rule.want != Want::Any) {
    if (!expect.empty()) expect += ", ";
    expect += describe(rule.want);
  }
  out.expected = expect;

  auto fail_row = [&](std::size_t i, const std::string& why) {
    out.pass = false;
    out.failures.push_back("row " + std::to_string(first + i) + " (delta=" + fmt(delta[i]) + ") " + name + "=" +
                           fmt(v[i]) + ": " + why);
  };

  if (rule.side != Side::Any) {
    for (std::size_t i = 0; i < n; ++i) {
      bool ok = rule.side == Side::Above ? v[i] > base : v[i] < base;
      if (!ok) {
        fail_row(i, std::string("expected ") + (rule.side == Side::Above ? "above " : "below ") + fmt(base));
        break;
      }
    }
  }

  auto first_bad_step = [&](int allowed) -> std::size_t {
    for (std::size_t i = 0; i < steps.size(); ++i)
      if (steps[i] != allowed) return i + 1;
    return n;
  };

  switch (rule.want) {
    case Want::Any: break;
    case Want::Unchanged:
      if (out.shape != Shape::Unchanged) {
        for (std::size_t i = 0; i < n; ++i)
          if (v[i] != base) {
            fail_row(i, "expected exactly " + fmt(base));
            break;
          }
      }
      break;
    case Want::Increasing:
    case Want::Decreasing: {
      if (out.shape == Shape::TooShort) break;
      Shape want = rule.want == Want::Increasing ? Shape::Increasing : Shape::Decreasing;
      if (out.shape != want) {
        std::size_t i = first_bad_step(rule.want == Want::Increasing ? 1 : -1);
        fail_row(std::min(i, n - 1), std::string("expected strictly ") + describe(rule.want));
      }
      break;
    }
    case Want::IncDec:
      if (out.shape != Shape::IncreasingThenDecreasing && out.shape != Shape::TooShort)
        fail_row(0, "expected increasing then decreasing");
      break;
    case Want::IncOrIncDec:
      if (out.shape != Shape::Increasing && out.shape != Shape::IncreasingThenDecreasing && out.shape != Shape::TooShort)
        fail_row(std::min(first_bad_step(1), n - 1), "expected increasing (then decreasing past delta_bar)");
      break;
  }
  return out;
}

}  // namespace

MonotonicityReport monotonicity_report(const SweepTable& table) {
  const auto& o = table.orbit;
  MonotonicityReport rep{table.th.delta2 < o.t_max ? "delta2 < t_max" : "delta2 >= t_max", true, {}};
  const auto& rows = table.rows;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j + 1 < rows.size() && rows[j + 1].code == rows[i].code) ++j;
    std::vector<double> delta, xmin, xmax, T;
    for (std::size_t k = i; k <= j; ++k) {
      delta.push_back(rows[k].delta);
      xmin.push_back(rows[k].x_min);
      xmax.push_back(rows[k].x_max);
      T.push_back(rows[k].T);
    }
    CaseRule rule = rule_for(rows[i].code);
    if (rows[i].code == CaseCode::FNFN) {
      // x_min turns from rising to falling at delta_bar when delta_bar falls inside the run.
      std::size_t before = 0, after = 0;
      for (double d : delta) (d < table.th.delta_bar ? before : after)++;
      if (before >= 2 && after >= 2) rule.xmin.want = Want::IncDec;
      else if (table.th.delta_bar >= delta.back()) rule.xmin.want = Want::Increasing;
    }
    IntervalVerdict iv{rows[i].code, i, j, {}, true};
    iv.columns.push_back(judge("xmin", delta, xmin, i, o.x_min, rule.xmin));
    iv.columns.push_back(judge("xmax", delta, xmax, i, o.x_max, rule.xmax));
    iv.columns.push_back(judge("T", delta, T, i, o.period, rule.T));
    for (const auto& c : iv.columns) iv.pass = iv.pass && c.pass;
    rep.pass = rep.pass && iv.pass;
    rep.intervals.push_back(std::move(iv));
    i = j + 1;
  }
  return rep;
}

}  // namespace relaydde
