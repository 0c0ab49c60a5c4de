#include "relaydde/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace relaydde::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Non-finite values have no JSON number form.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json arc_json(const ExpArc& a) { return {{"t_start", a.t_start}, {"t_end", a.t_end}, {"c", a.c}, {"k", a.k}}; }

json arcs_json(const std::vector<ExpArc>& arcs) {
  json out = json::array();
  for (const auto& a : arcs) out.push_back(arc_json(a));
  return out;
}

std::vector<ExpArc> arcs_from_json(const json& j) {
  std::vector<ExpArc> out;
  for (const auto& a : j)
    out.push_back({a.at("t_start").get<double>(), a.at("t_end").get<double>(), a.at("c").get<double>(),
                   a.at("k").get<double>()});
  return out;
}

json zeros_json(const std::vector<Zero>& zeros) {
  json out = json::array();
  for (const auto& z : zeros) out.push_back({{"t", z.t}, {"direction", to_string(z.dir)}});
  return out;
}

json trajectory_json(const Trajectory& traj) {
  return {{"tau", traj.tau()},
          {"horizon", traj.horizon},
          {"history", arcs_json(traj.history.arcs())},
          {"arcs", arcs_json(traj.arcs)},
          {"zeros", zeros_json(traj.zeros)}};
}

std::string trajectory_csv(const Trajectory& traj, int n, bool with_breaks) {
  std::vector<double> ts;
  for (int i = 0; i <= n; ++i) ts.push_back(traj.horizon * i / n);
  if (with_breaks)
    for (const auto& a : traj.arcs) ts.push_back(a.t_start);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::ostringstream out;
  out << "t,x\n";
  for (double t : ts) out << format_double(t) << ',' << format_double(traj(t)) << '\n';
  return out.str();
}

json params_json(const ModelParams& p) { return {{"tau", p.tau}, {"beta_l", p.beta_l}, {"beta_u", p.beta_u}}; }

json orbit_json(const PeriodicOrbit& o) {
  return {{"z1", o.z1}, {"z2", o.z2}, {"T", o.period}, {"xmin", o.x_min}, {"xmax", o.x_max}, {"tmax", o.t_max}};
}

json thresholds_json(const Thresholds& th) {
  return {{"delta1", num(th.delta1)},
          {"delta1_hat", num(th.delta1_hat)},
          {"delta2", num(th.delta2)},
          {"delta_bar", num(th.delta_bar)},
          {"delta2_beyond_z2", th.delta2_beyond_z2}};
}

json cycle_stats_json(const CycleStats& s) {
  json j = {{"delta", s.delta},
            {"case", to_string(s.code)},
            {"T", num(s.T)},
            {"infinite", !s.finite()},
            {"xmin", num(s.x_min)},
            {"xmax", num(s.x_max)},
            {"J", s.J},
            {"zeros", s.zeros}};
  if (!s.sublabel.empty()) j["sublabel"] = s.sublabel;
  if (!s.diagnostics.empty()) j["diagnostics"] = s.diagnostics;
  return j;
}

json intervals_json(const std::vector<CaseInterval>& seq) {
  json out = json::array();
  for (const auto& iv : seq)
    out.push_back({{"case", to_string(iv.code)},
                   {"lo", iv.lo},
                   {"hi", iv.hi},
                   {"lo_closed", iv.lo_closed},
                   {"hi_closed", iv.hi_closed}});
  return out;
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "delta,case,T,xmin,xmax\n";
  for (const auto& r : table.rows)
    out << format_double(r.delta) << ',' << to_string(r.code) << ',' << (r.finite() ? format_double(r.T) : "inf")
        << ',' << format_double(r.x_min) << ',' << format_double(r.x_max) << '\n';
  return out.str();
}

json report_json(const MonotonicityReport& rep) {
  json ivs = json::array();
  for (const auto& iv : rep.intervals) {
    json cols = json::array();
    for (const auto& c : iv.columns)
      cols.push_back({{"column", c.column},
                      {"shape", to_string(c.shape)},
                      {"relation", to_string(c.relation)},
                      {"expected", c.expected},
                      {"pass", c.pass},
                      {"failures", c.failures}});
    ivs.push_back({{"case", to_string(iv.code)},
                   {"first_row", iv.first_row},
                   {"last_row", iv.last_row},
                   {"pass", iv.pass},
                   {"columns", cols}});
  }
  return {{"layout", rep.layout}, {"pass", rep.pass}, {"intervals", ivs}};
}

json sweep_json(const SweepTable& t, const MonotonicityReport& rep) {
  json markers = json::object();
  for (const auto& [name, v] : t.markers) markers[name] = num(v);
  json sequence = json::array();
  for (const auto& iv : t.intervals) sequence.push_back(to_string(iv.code));
  return {{"params", params_json(t.params)},
          {"a", t.a},
          {"sigma", t.sigma},
          {"grid", t.n},
          {"orbit", orbit_json(t.orbit)},
          {"thresholds", thresholds_json(t.th)},
          {"markers", markers},
          {"sequence", sequence},
          {"intervals", intervals_json(t.intervals)},
          {"left_limit", cycle_stats_json(t.left_limit)},
          {"report", report_json(rep)}};
}

json plan_json(const TherapyPlan& p, const TreatmentResult* r) {
  json j = {{"phi0", p.phi0},
            {"q", p.q},
            {"z1", p.z1},
            {"t_d", p.t_d},
            {"t_M", p.t_m},
            {"a_d", p.a_d},
            {"checks",
             {{"tMpos", p.checks.t_m_positive},
              {"sigma_window", p.checks.sigma_window},
              {"xdneg", p.checks.x_d_negative},
              {"ad", p.checks.amplitude}}},
            {"tau_before_t_d", p.tau_before_t_d},
            {"feasible", p.feasible},
            {"predicted_period", p.predicted_period},
            {"achieved_min", nullptr},
            {"achieved_period", nullptr}};
  if (r) {
    j["achieved_min"] = r->achieved_min;
    j["achieved_period"] = r->achieved_period;
    j["cycle_min"] = r->cycle_min;
    j["periodicity_error"] = r->periodicity_error;
  }
  return j;
}

json three_level_json(const ThreeLevelPulse& r) {
  return {{"x_tmax", r.x_at_tmax},
          {"t_star", r.t_star},
          {"exp_z1_minus_t_star", r.exp_z1_minus_tstar},
          {"x_tstar_tau", r.x_at_tstar_tau},
          {"x_z1_2tau", r.x_at_z1_2tau},
          {"xmin_base", r.x_min_base},
          {"undershoot", r.undershoot}};
}

json undershoot_json(const UndershootThreshold& u) {
  return {{"tau0", u.tau0},
          {"bracket", {u.bracket_lo, u.bracket_hi}},
          {"verified", u.verified},
          {"check_taus", u.check_taus}};
}

json comparison_json(const Comparison& c) {
  return {{"max_abs_dev", c.max_abs_dev},
          {"zero_time_devs", c.zero_time_devs},
          {"max_zero_dev", c.max_zero_dev()},
          {"exact_zeros", c.exact_zeros},
          {"dense_zeros", c.dense_zeros},
          {"zero_counts_match", c.zero_counts_match()}};
}

}  // namespace relaydde::io
