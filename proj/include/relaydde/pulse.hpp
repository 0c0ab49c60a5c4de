#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relaydde/engine.hpp"
#include "relaydde/model.hpp"
#include "relaydde/orbit.hpp"

namespace relaydde {

// Phase (Rising/Falling) and sign (Negative/Positive) at pulse onset, then at pulse end.
// FNFP only occurs when a >= beta_U.
enum class CaseCode { RNRN, RNRP, RPRP, RPFP, RPFN, FPFP, FPFN, FNFP, FNFN, FNRN, FNRP };

const char* to_string(CaseCode c);
std::optional<CaseCode> case_from_string(std::string_view s);

struct Thresholds {
  double delta1;
  double delta1_hat;
  double delta2;  // +inf when beta_U <= a (1 - e^{-sigma})
  double delta_bar;
  bool delta2_beyond_z2;  // only possible in relaxed mode
};

Thresholds thresholds(const ModelParams& p, double a, double sigma, bool relaxed = false);
Thresholds thresholds(const PeriodicOrbit& orbit, double a, double sigma);

CaseCode classify(const ModelParams& p, const PulseSpec& pulse);
CaseCode classify(const PeriodicOrbit& orbit, const Thresholds& th, double delta, double sigma);

struct CycleStats {
  double delta = 0;
  CaseCode code = CaseCode::RNRN;
  std::string sublabel;  // RNRP1 / RNRP2, empty otherwise
  double T = 0;          // +inf when the perturbed solution never rejoins the orbit
  double x_min = 0;
  double x_max = 0;
  int J = 0;
  std::vector<double> zeros;  // z_{D,J}, z_{D,J+1}, z_{D,J+2}
  std::string diagnostics;

  bool finite() const;
};

// Index J with z~_J <= delta < z~_{J+1}.
int phase_index(const PeriodicOrbit& orbit, double delta);

CycleStats response_closed_form(const ModelParams& p, const PulseSpec& pulse);
CycleStats response_closed_form(const PeriodicOrbit& orbit, const Thresholds& th, const PulseSpec& pulse);

// The closed form of one particular case, evaluated at pulse.delta whether or not delta lies in its interval.
CycleStats evaluate_case(const PeriodicOrbit& orbit, const Thresholds& th, const PulseSpec& pulse, CaseCode code);

// Builds the pulsed solution with the exact engine and reads T, extrema and zeros off it.
CycleStats response_simulated(const ModelParams& p, const PulseSpec& pulse);

// The pulsed solution started on the orbit at x~_0; horizon as used by response_simulated.
Trajectory pulsed_trajectory(const PeriodicOrbit& orbit, const PulseSpec& pulse, double horizon);

}  // namespace relaydde
