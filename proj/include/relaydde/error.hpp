#pragma once

#include <stdexcept>
#include <string>

namespace relaydde {

enum class ErrorKind {
  Validation,
  Regime,
  OutOfDomain,
  NonTransversal,
  IdenticallyZeroHistory,
  InvalidHistory,
  HorizonExhausted,
  StandingHypothesisViolated,
  PlanInfeasible,
  StepTooLarge,
  MismatchedExperiment,
  NoUndershoot,
  Domain,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// One clause per invariant so callers can tell exactly what was rejected.
enum class Clause {
  NotFinite,
  GammaPositive,
  ThetaPositive,
  BUpperPositive,
  BUpperBelowBLower,
  BLowerNotDegenerate,
  BUpperNotDegenerate,
  TauRawPositive,
  TauPositive,
  BetaLowerNonzero,
  BetaUpperNonzero,
  BetaSumPositive,
  AmplitudePositive,
  SigmaRange,
  AmplitudeBelowBetaUpper,
  BetaStarAboveBetaUpper,
};

const char* to_string(Clause clause);

class ValidationError : public Error {
 public:
  explicit ValidationError(Clause clause);
  ValidationError(Clause clause, const std::string& detail);
  Clause clause() const noexcept { return clause_; }

 private:
  Clause clause_;
};

}  // namespace relaydde
