#include "relaydde/error.hpp"

namespace relaydde {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::Regime: return "RegimeError";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NonTransversal: return "NonTransversal";
    case ErrorKind::IdenticallyZeroHistory: return "IdenticallyZeroHistory";
    case ErrorKind::InvalidHistory: return "InvalidHistory";
    case ErrorKind::HorizonExhausted: return "HorizonExhausted";
    case ErrorKind::StandingHypothesisViolated: return "StandingHypothesisViolated";
    case ErrorKind::PlanInfeasible: return "PlanInfeasible";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::MismatchedExperiment: return "MismatchedExperiment";
    case ErrorKind::NoUndershoot: return "NoUndershoot";
    case ErrorKind::Domain: return "DomainError";
  }
  return "Error";
}

const char* to_string(Clause clause) {
  switch (clause) {
    case Clause::NotFinite: return "all parameters must be finite";
    case Clause::GammaPositive: return "gamma > 0";
    case Clause::ThetaPositive: return "theta > 0";
    case Clause::BUpperPositive: return "b_U > 0";
    case Clause::BUpperBelowBLower: return "b_U < b_L";
    case Clause::BLowerNotDegenerate: return "b_L != gamma*theta";
    case Clause::BUpperNotDegenerate: return "b_U != gamma*theta";
    case Clause::TauRawPositive: return "tau_raw > 0";
    case Clause::TauPositive: return "tau > 0";
    case Clause::BetaLowerNonzero: return "beta_L != 0";
    case Clause::BetaUpperNonzero: return "beta_U != 0";
    case Clause::BetaSumPositive: return "beta_L + beta_U > 0";
    case Clause::AmplitudePositive: return "a > 0";
    case Clause::SigmaRange: return "0 < sigma <= tau";
    case Clause::AmplitudeBelowBetaUpper: return "a < beta_U (pass relaxed mode to allow a >= beta_U)";
    case Clause::BetaStarAboveBetaUpper: return "beta_star > beta_U";
  }
  return "invalid";
}

Error::Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

ValidationError::ValidationError(Clause clause)
    : Error(ErrorKind::Validation, std::string("validation failed: ") + to_string(clause)), clause_(clause) {}

ValidationError::ValidationError(Clause clause, const std::string& detail)
    : Error(ErrorKind::Validation, std::string("validation failed: ") + to_string(clause) + " (" + detail + ")"),
      clause_(clause) {}

}  // namespace relaydde
