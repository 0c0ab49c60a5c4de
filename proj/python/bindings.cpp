#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relaydde/io.hpp"

namespace py = pybind11;
using namespace relaydde;
using nlohmann::json;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(to_py(v));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
    default: return py::none();
  }
}

std::optional<PulseWindow> window(std::optional<double> a, std::optional<double> delta, std::optional<double> sigma) {
  if (!a) return std::nullopt;
  if (!delta || !sigma) throw py::value_error("a pulse needs a, delta and sigma");
  return PulseWindow{*a, *delta, *delta + *sigma};
}

py::object stats(const CycleStats& s) { return to_py(io::cycle_stats_json(s)); }

}  // namespace

PYBIND11_MODULE(relaydde, m) {
  m.doc() = "Exact solver for x'(t) = -x(t) + f(x(t - tau)) with relay feedback";

  auto& base_error = py::register_exception<Error>(m, "RelayError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", base_error.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double>(), py::arg("tau"), py::arg("beta_l"), py::arg("beta_u"))
      .def_readwrite("tau", &ModelParams::tau)
      .def_readwrite("beta_l", &ModelParams::beta_l)
      .def_readwrite("beta_u", &ModelParams::beta_u)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(tau=" + io::format_double(p.tau) + ", beta_l=" + io::format_double(p.beta_l) +
               ", beta_u=" + io::format_double(p.beta_u) + ")";
      });

  py::class_<RawParams>(m, "RawParams")
      .def(py::init<double, double, double, double, double>(), py::arg("gamma"), py::arg("b_l"), py::arg("b_u"),
           py::arg("theta"), py::arg("tau_raw"))
      .def_readwrite("gamma", &RawParams::gamma)
      .def_readwrite("b_l", &RawParams::b_l)
      .def_readwrite("b_u", &RawParams::b_u)
      .def_readwrite("theta", &RawParams::theta)
      .def_readwrite("tau_raw", &RawParams::tau_raw);

  m.attr("P1") = ModelParams{1.0, 0.4, 0.8};
  m.attr("P2") = ModelParams{1.0, 1.4, 0.8};

  m.def("nondimensionalize", &nondimensionalize, py::arg("raw"));
  m.def(
      "regime",
      [](const ModelParams& p) {
        auto r = regime(p);
        return py::make_tuple(to_string(r.regime), r.equilibrium ? py::object(py::float_(*r.equilibrium)) : py::none());
      },
      py::arg("params"), "Regime name and, for the attracting cases, the equilibrium.");

  py::class_<History>(m, "History")
      .def(py::init([](double tau, const std::vector<std::tuple<double, double, double, double>>& arcs) {
             std::vector<ExpArc> a;
             for (const auto& [t0, t1, c, k] : arcs) a.push_back({t0, t1, c, k});
             return History(tau, a);
           }),
           py::arg("tau"), py::arg("arcs"), "Arc chain on [-tau, 0]; each arc is (t_start, t_end, c, k).")
      .def_static("constant", &History::constant, py::arg("tau"), py::arg("value"))
      .def_property_readonly("tau", &History::tau)
      .def("__call__", py::vectorize([](History& h, double s) { return h(s); }))
      .def("in_z0", &History::in_z0)
      .def_property_readonly("arcs", [](const History& h) { return to_py(io::arcs_json(h.arcs())); });

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("horizon", &Trajectory::horizon)
      .def_readonly("history", &Trajectory::history)
      .def("__call__", py::vectorize([](Trajectory& tr, double t) { return tr(t); }))
      .def_property_readonly("arcs", [](const Trajectory& t) { return to_py(io::arcs_json(t.arcs)); })
      .def_property_readonly("zeros", [](const Trajectory& t) { return to_py(io::zeros_json(t.zeros)); })
      .def("segment_at", &Trajectory::segment_at, py::arg("t"))
      .def("to_csv", &io::trajectory_csv, py::arg("n") = 1000, py::arg("with_breaks") = false)
      .def("to_dict", [](const Trajectory& t) { return to_py(io::trajectory_json(t)); });

  py::class_<PeriodicOrbit>(m, "PeriodicOrbit")
      .def_readonly("params", &PeriodicOrbit::params)
      .def_readonly("z1", &PeriodicOrbit::z1)
      .def_readonly("z2", &PeriodicOrbit::z2)
      .def_readonly("period", &PeriodicOrbit::period)
      .def_readonly("x_min", &PeriodicOrbit::x_min)
      .def_readonly("x_max", &PeriodicOrbit::x_max)
      .def_readonly("t_max", &PeriodicOrbit::t_max)
      .def("__call__", py::vectorize([](PeriodicOrbit& o, double t) { return o(t); }))
      .def("segment", &PeriodicOrbit::segment, py::arg("t") = 0.0)
      .def("to_dict", [](const PeriodicOrbit& o) { return to_py(io::orbit_json(o)); });

  m.def("periodic_solution", &periodic_solution, py::arg("params"));

  m.def(
      "evolve",
      [](const ModelParams& p, const History& h, double horizon, std::optional<double> a, std::optional<double> delta,
         std::optional<double> sigma) { return evolve(p, h, horizon, window(a, delta, sigma)); },
      py::arg("params"), py::arg("history"), py::arg("horizon"), py::arg("a") = py::none(),
      py::arg("delta") = py::none(), py::arg("sigma") = py::none(),
      "Exact solution on [0, horizon], optionally with a pulse of height a on [delta, delta + sigma].");

  m.def(
      "merge_time",
      [](const Trajectory& tr, const PeriodicOrbit& o, double t_free) -> py::object {
        auto r = merge_time(tr, o, t_free);
        if (!r) return py::none();
        py::dict d;
        d["zero"] = r->zero;
        d["phase"] = to_string(r->phase);
        d["joined"] = r->joined;
        return d;
      },
      py::arg("trajectory"), py::arg("orbit"), py::arg("t_free") = 0.0);

  m.def(
      "thresholds",
      [](const ModelParams& p, double a, double sigma, bool relaxed) {
        return to_py(io::thresholds_json(thresholds(p, a, sigma, relaxed)));
      },
      py::arg("params"), py::arg("a"), py::arg("sigma"), py::arg("relaxed") = false);

  m.def(
      "classify",
      [](const ModelParams& p, double a, double delta, double sigma, bool relaxed) {
        return std::string(to_string(classify(p, make_pulse(p, a, delta, sigma, relaxed))));
      },
      py::arg("params"), py::arg("a"), py::arg("delta"), py::arg("sigma"), py::arg("relaxed") = false);

  m.def(
      "response",
      [](const ModelParams& p, double a, double delta, double sigma, bool relaxed, bool simulate) {
        auto pulse = make_pulse(p, a, delta, sigma, relaxed);
        return stats(simulate ? response_simulated(p, pulse) : response_closed_form(p, pulse));
      },
      py::arg("params"), py::arg("a"), py::arg("delta"), py::arg("sigma"), py::arg("relaxed") = false,
      py::arg("simulate") = false, "Cycle length and extrema after one pulse.");

  m.def(
      "case_sequence",
      [](const ModelParams& p, double a, double sigma) {
        std::vector<std::string> out;
        for (const auto& iv : case_sequence(p, a, sigma)) out.push_back(to_string(iv.code));
        return out;
      },
      py::arg("params"), py::arg("a"), py::arg("sigma"));

  m.def(
      "sweep",
      [](const ModelParams& p, double a, double sigma, int n, bool simulate, bool relaxed) {
        auto t = cycle_length_map(p, a, sigma, n, {simulate, relaxed});
        auto j = io::sweep_json(t, monotonicity_report(t));
        json rows = json::array();
        for (const auto& r : t.rows) rows.push_back(io::cycle_stats_json(r));
        j["rows"] = rows;
        j["csv"] = io::sweep_csv(t);
        return to_py(j);
      },
      py::arg("params"), py::arg("a"), py::arg("sigma"), py::arg("n") = 1024, py::arg("simulate") = false,
      py::arg("relaxed") = false, "Cycle length map over [0, T~) with its monotonicity report.");

  m.def(
      "therapy",
      [](const ModelParams& p, double sigma, double x_d, std::optional<double> phi0) {
        auto o = periodic_solution(p);
        TherapyInput in{p, sigma, x_d, phi0 ? History::constant(p.tau, *phi0) : canonical_history(o)};
        auto pl = plan(in);
        if (!pl.feasible) return to_py(io::plan_json(pl, nullptr));
        auto res = apply_plan(in, pl);
        return to_py(io::plan_json(pl, &res));
      },
      py::arg("params"), py::arg("sigma"), py::arg("x_d"), py::arg("phi0") = py::none(),
      "Plan a dose lifting the nadir to x_d and apply it when feasible.");

  m.def(
      "three_level",
      [](const ModelParams& p, double beta_star, double a, bool simulate) {
        ThreeLevelParams tl{p, beta_star};
        return to_py(io::three_level_json(simulate ? three_level_simulated(tl, a) : three_level_pulse(tl, a)));
      },
      py::arg("params"), py::arg("beta_star"), py::arg("a"), py::arg("simulate") = false);

  m.def(
      "undershoot_threshold",
      [](const ModelParams& p, double beta_star, double a) {
        return to_py(io::undershoot_json(undershoot_threshold({p, beta_star}, a)));
      },
      py::arg("params"), py::arg("beta_star"), py::arg("a"));

  m.def(
      "verify",
      [](const ModelParams& p, const History& h, double horizon, double step, std::optional<double> a,
         std::optional<double> delta, std::optional<double> sigma) {
        auto w = window(a, delta, sigma);
        auto exact = evolve(p, h, horizon, w);
        auto dense = integrate_dense(p, [&](double s) { return h(s); }, horizon, w, step);
        return to_py(io::comparison_json(compare(exact, dense)));
      },
      py::arg("params"), py::arg("history"), py::arg("horizon"), py::arg("step") = 1e-4, py::arg("a") = py::none(),
      py::arg("delta") = py::none(), py::arg("sigma") = py::none(), "Exact engine against the dense oracle.");
}
