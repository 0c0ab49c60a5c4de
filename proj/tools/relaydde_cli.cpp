#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "relaydde/io.hpp"

using namespace relaydde;
using nlohmann::json;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitFailed = 3;

struct Options {
  std::string preset;
  std::optional<double> tau, beta_l, beta_u;
  std::optional<double> gamma, b_l, b_u, theta, tau_raw;
  std::optional<double> amp, sigma, delta, horizon;
  int grid = 1024;
  std::string format = "json";
  std::string out;
  bool relaxed = false;
  double oracle_step = 1e-4;
  std::string history = "constant:1";
  // subcommand specific
  bool simulate = false;
  bool with_breaks = false;
  std::optional<double> x_d, phi0;
  std::optional<double> beta_star;
  bool find_tau0 = false;
  double tol = 1e-5;
  double zero_tol = 1e-6;
  std::string report;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_params(CLI::App* sub, Options& o) {
  sub->add_option("--preset", o.preset, "Parameter preset")->check(CLI::IsMember({"p1", "p2"}));
  sub->add_option("--tau", o.tau, "Delay (nondimensional)");
  sub->add_option("--beta-l", o.beta_l, "Lower production level beta_L");
  sub->add_option("--beta-u", o.beta_u, "Upper suppression level beta_U");
  sub->add_option("--gamma", o.gamma, "Raw model decay rate");
  sub->add_option("--b-l", o.b_l, "Raw production below threshold");
  sub->add_option("--b-u", o.b_u, "Raw production above threshold");
  sub->add_option("--theta", o.theta, "Raw threshold");
  sub->add_option("--tau-raw", o.tau_raw, "Raw delay");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "Output path (stdout if omitted)");
}

void add_pulse(CLI::App* sub, Options& o) {
  sub->add_option("--amp", o.amp, "Pulse amplitude a");
  sub->add_option("--sigma", o.sigma, "Pulse duration");
  sub->add_flag("--relaxed", o.relaxed, "Allow a >= beta_U");
}

ModelParams resolve_params(const Options& o) {
  bool any_raw = o.gamma || o.b_l || o.b_u || o.theta || o.tau_raw;
  if (any_raw) {
    if (!(o.gamma && o.b_l && o.b_u && o.theta && o.tau_raw))
      throw UsageError("raw model needs all of --gamma --b-l --b-u --theta --tau-raw");
    if (!o.preset.empty() || o.tau || o.beta_l || o.beta_u)
      throw UsageError("raw flags cannot be combined with --preset or nondimensional flags");
    return nondimensionalize({*o.gamma, *o.b_l, *o.b_u, *o.theta, *o.tau_raw});
  }
  std::optional<ModelParams> p;
  if (o.preset == "p1") p = ModelParams{1.0, 0.4, 0.8};
  if (o.preset == "p2") p = ModelParams{1.0, 1.4, 0.8};
  if (!p) {
    if (!(o.tau && o.beta_l && o.beta_u)) throw UsageError("give --preset, or --tau --beta-l --beta-u, or the raw flags");
    p = ModelParams{};
  }
  if (o.tau) p->tau = *o.tau;
  if (o.beta_l) p->beta_l = *o.beta_l;
  if (o.beta_u) p->beta_u = *o.beta_u;
  validate(*p);
  return *p;
}

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing ") + flag);
  return *v;
}

History parse_history(const std::string& spec, const ModelParams& p) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  try {
    if (kind == "constant") return History::constant(p.tau, arg.empty() ? 1.0 : std::stod(arg));
    if (kind == "orbit") return periodic_solution(p).segment(arg.empty() ? 0.0 : std::stod(arg));
  } catch (const std::invalid_argument&) {
    throw UsageError("bad number in --history " + spec);
  }
  if (kind == "arcs") {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot read " + arg);
    json j = json::parse(in);
    return History(p.tau, io::arcs_from_json(j.is_object() ? j.at("arcs") : j));
  }
  throw UsageError("--history must be constant[:v], orbit[:t] or arcs:PATH");
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.out);
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_orbit(const Options& o) {
  auto p = resolve_params(o);
  json j = io::orbit_json(periodic_solution(p));
  j["params"] = io::params_json(p);
  emit(o, dump(j));
  return 0;
}

int cmd_simulate(const Options& o) {
  auto p = resolve_params(o);
  auto h = parse_history(o.history, p);
  std::optional<PulseWindow> pulse;
  if (o.amp) {
    double s = require(o.sigma, "--sigma");
    double d = require(o.delta, "--delta");
    if (!(s > 0)) throw ValidationError(Clause::SigmaRange);
    pulse = PulseWindow{*o.amp, d, d + s};
  }
  double horizon = o.horizon ? *o.horizon : 3 * (regime(p).regime == Regime::Oscillatory ? periodic_solution(p).period : p.tau);
  if (!(horizon > 0)) throw UsageError("--horizon must be positive");
  auto traj = evolve(p, h, horizon, pulse);
  if (o.format == "csv") {
    emit(o, io::trajectory_csv(traj, o.grid, o.with_breaks));
  } else {
    json j = io::trajectory_json(traj);
    j["params"] = io::params_json(p);
    emit(o, dump(j));
  }
  return 0;
}

int cmd_classify(const Options& o) {
  auto p = resolve_params(o);
  auto pulse = make_pulse(p, require(o.amp, "--amp"), require(o.delta, "--delta"), require(o.sigma, "--sigma"), o.relaxed);
  auto orbit = periodic_solution(p);
  auto th = thresholds(p, pulse.a, pulse.sigma, pulse.relaxed);
  bool sim = o.simulate || pulse.a >= p.beta_u;
  CycleStats s = sim ? response_simulated(p, pulse) : response_closed_form(p, pulse);
  json j = io::cycle_stats_json(s);
  j["method"] = sim ? "simulated" : "closed_form";
  j["params"] = io::params_json(p);
  j["a"] = pulse.a;
  j["sigma"] = pulse.sigma;
  j["orbit"] = io::orbit_json(orbit);
  j["thresholds"] = io::thresholds_json(th);
  emit(o, dump(j));
  return 0;
}

int cmd_sweep(const Options& o) {
  auto p = resolve_params(o);
  double a = require(o.amp, "--amp"), sigma = require(o.sigma, "--sigma");
  make_pulse(p, a, 0.0, sigma, o.relaxed);
  if (o.grid < 16) throw UsageError("--grid must be at least 16");
  auto table = cycle_length_map(p, a, sigma, o.grid, {o.simulate, o.relaxed});
  auto rep = monotonicity_report(table);
  json j = io::sweep_json(table, rep);
  if (o.format == "csv") {
    emit(o, io::sweep_csv(table));
    if (!o.report.empty()) {
      std::ofstream f(o.report, std::ios::binary);
      if (!f) throw UsageError("cannot write " + o.report);
      f << dump(j);
    }
  } else {
    json rows = json::array();
    for (const auto& r : table.rows) rows.push_back(io::cycle_stats_json(r));
    j["rows"] = rows;
    emit(o, dump(j));
  }
  return 0;
}

int cmd_therapy(const Options& o) {
  auto p = resolve_params(o);
  auto orbit = periodic_solution(p);
  History h = o.phi0 ? History::constant(p.tau, *o.phi0) : canonical_history(orbit);
  TherapyInput in{p, require(o.sigma, "--sigma"), require(o.x_d, "--x-d"), h};
  auto pl = plan(in);
  std::optional<TreatmentResult> res;
  if (pl.feasible) res = apply_plan(in, pl);
  if (o.format == "csv") {
    if (!res) throw Error(ErrorKind::PlanInfeasible, "plan infeasible, no treated trajectory");
    emit(o, io::trajectory_csv(res->trajectory, o.grid, o.with_breaks));
  } else {
    json j = io::plan_json(pl, res ? &*res : nullptr);
    j["params"] = io::params_json(p);
    j["sigma"] = in.sigma;
    j["x_d"] = in.x_d;
    j["T_tilde"] = orbit.period;
    emit(o, dump(j));
  }
  return pl.feasible ? 0 : kExitFailed;
}

int cmd_threelevel(const Options& o) {
  auto p = resolve_params(o);
  ThreeLevelParams tl{p, require(o.beta_star, "--beta-star")};
  double a = require(o.amp, "--amp");
  json j;
  if (o.find_tau0) {
    j = io::undershoot_json(undershoot_threshold(tl, a));
  } else {
    j = io::three_level_json(three_level_pulse(tl, a));
    if (o.simulate) j["simulated"] = io::three_level_json(three_level_simulated(tl, a));
  }
  j["params"] = io::params_json(p);
  j["beta_star"] = tl.beta_star;
  j["a"] = a;
  emit(o, dump(j));
  return 0;
}

int cmd_verify(const Options& o) {
  auto p = resolve_params(o);
  auto h = parse_history(o.history, p);
  auto orbit_period = regime(p).regime == Regime::Oscillatory ? periodic_solution(p).period : p.tau;
  double horizon = o.horizon ? *o.horizon : 3 * orbit_period;
  std::optional<PulseWindow> pulse;
  if (o.amp) {
    double d = require(o.delta, "--delta");
    pulse = PulseWindow{*o.amp, d, d + require(o.sigma, "--sigma")};
  }
  auto exact = evolve(p, h, horizon, pulse);
  auto dense = integrate_dense(p, [&](double s) { return h(s); }, horizon, pulse, o.oracle_step);
  auto c = compare(exact, dense);
  bool pass = c.max_abs_dev <= o.tol && c.max_zero_dev() <= o.zero_tol && c.zero_counts_match();
  json j = io::comparison_json(c);
  j["params"] = io::params_json(p);
  j["horizon"] = horizon;
  j["oracle_step"] = o.oracle_step;
  j["tol"] = o.tol;
  j["zero_tol"] = o.zero_tol;
  j["pass"] = pass;
  emit(o, dump(j));
  return pass ? 0 : kExitFailed;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::PlanInfeasible:
    case ErrorKind::NoUndershoot:
    case ErrorKind::HorizonExhausted:
      return kExitFailed;
    default:
      return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver and analysis toolkit for the delayed relay-feedback equation"};
  app.require_subcommand(1);
  Options o;

  auto* orbit = app.add_subcommand("orbit", "Closed-form periodic orbit");
  add_params(orbit, o);

  auto* simulate = app.add_subcommand("simulate", "Exact arc-chain trajectory");
  add_params(simulate, o);
  simulate->add_option("--history", o.history, "constant[:v] | orbit[:t] | arcs:PATH");
  simulate->add_option("--horizon", o.horizon, "End time (default 3 periods)");
  simulate->add_option("--amp", o.amp, "Pulse amplitude");
  simulate->add_option("--sigma", o.sigma, "Pulse duration");
  simulate->add_option("--delta", o.delta, "Pulse onset");
  simulate->add_option("--grid", o.grid, "CSV sample intervals")->check(CLI::PositiveNumber);
  simulate->add_flag("--breaks", o.with_breaks, "Also sample every arc start");

  auto* classify = app.add_subcommand("classify", "Case code and cycle statistics for one pulse");
  add_params(classify, o);
  add_pulse(classify, o);
  classify->add_option("--delta", o.delta, "Pulse onset");
  classify->add_flag("--simulate", o.simulate, "Use the simulated response");

  auto* sweep = app.add_subcommand("sweep", "Cycle length map over the onset");
  add_params(sweep, o);
  add_pulse(sweep, o);
  sweep->add_option("--grid", o.grid, "Number of onset values");
  sweep->add_flag("--simulate", o.simulate, "Also simulate every row");
  sweep->add_option("--report", o.report, "With --format csv, write the JSON report here");

  auto* therapy = app.add_subcommand("therapy", "Plan a dose that lifts the nadir to x_d");
  add_params(therapy, o);
  therapy->add_option("--sigma", o.sigma, "Release duration");
  therapy->add_option("--x-d", o.x_d, "Critical level");
  therapy->add_option("--phi0", o.phi0, "Constant positive history value (default: orbit segment)");
  therapy->add_option("--grid", o.grid, "CSV sample intervals")->check(CLI::PositiveNumber);
  therapy->add_flag("--breaks", o.with_breaks, "Also sample every arc start");

  auto* three = app.add_subcommand("threelevel", "Three-level feedback pulse");
  add_params(three, o);
  three->add_option("--beta-star", o.beta_star, "Deep suppression level");
  three->add_option("--amp", o.amp, "Pulse amplitude");
  three->add_flag("--find-tau0", o.find_tau0, "Search the undershoot onset delay");
  three->add_flag("--simulate", o.simulate, "Cross-check with the exact engine");

  auto* verify = app.add_subcommand("verify", "Exact engine versus dense oracle");
  add_params(verify, o);
  verify->add_option("--history", o.history, "constant[:v] | orbit[:t] | arcs:PATH");
  verify->add_option("--horizon", o.horizon, "End time (default 3 periods)");
  verify->add_option("--amp", o.amp, "Pulse amplitude");
  verify->add_option("--sigma", o.sigma, "Pulse duration");
  verify->add_option("--delta", o.delta, "Pulse onset");
  verify->add_option("--oracle-step", o.oracle_step, "Oracle step size");
  verify->add_option("--tol", o.tol, "Trajectory tolerance");
  verify->add_option("--zero-tol", o.zero_tol, "Zero time tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*orbit) return cmd_orbit(o);
    if (*simulate) return cmd_simulate(o);
    if (*classify) return cmd_classify(o);
    if (*sweep) return cmd_sweep(o);
    if (*therapy) return cmd_therapy(o);
    if (*three) return cmd_threelevel(o);
    if (*verify) return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) std::cerr << sub->help();
    return kExitInput;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
