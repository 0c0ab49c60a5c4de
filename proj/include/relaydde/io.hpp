#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "relaydde/engine.hpp"
#include "relaydde/error.hpp"
#include "relaydde/oracle.hpp"
#include "relaydde/orbit.hpp"
#include "relaydde/pulse.hpp"
#include "relaydde/sweep.hpp"
#include "relaydde/therapy.hpp"
#include "relaydde/three_level.hpp"

namespace relaydde::io {

using nlohmann::json;

// 17 significant digits; round-trips every double.
std::string format_double(double v);

json arc_json(const ExpArc& arc);
json arcs_json(const std::vector<ExpArc>& arcs);
std::vector<ExpArc> arcs_from_json(const json& j);
json zeros_json(const std::vector<Zero>& zeros);

json trajectory_json(const Trajectory& traj);
// Rows "t,x" at n + 1 evenly spaced times on [0, horizon], plus every arc endpoint if with_breaks.
std::string trajectory_csv(const Trajectory& traj, int n, bool with_breaks = false);

json params_json(const ModelParams& p);
json orbit_json(const PeriodicOrbit& orbit);
json thresholds_json(const Thresholds& th);
json cycle_stats_json(const CycleStats& s);
json intervals_json(const std::vector<CaseInterval>& seq);
std::string sweep_csv(const SweepTable& table);
json report_json(const MonotonicityReport& rep);
json sweep_json(const SweepTable& table, const MonotonicityReport& rep);
json plan_json(const TherapyPlan& plan, const TreatmentResult* result);
json three_level_json(const ThreeLevelPulse& r);
json undershoot_json(const UndershootThreshold& u);
json comparison_json(const Comparison& c);

}  // namespace relaydde::io
