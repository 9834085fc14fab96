#pragma once

#include <stdexcept>
#include <string>

namespace amp {

/// Caller supplied a value outside an operation's domain.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was invoked on data that violates its documented contract,
/// e.g. a non-uniform term set applied in the symmetric subspace.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Integrated state left the unit sphere by more than the configured tolerance.
class NormDriftError : public std::runtime_error {
 public:
  NormDriftError(const std::string& what, long step, double drift)
      : std::runtime_error(what), step_(step), drift_(drift) {}
  long step() const noexcept { return step_; }
  double drift() const noexcept { return drift_; }

 private:
  long step_;
  double drift_;
};

class EigenSolveError : public std::runtime_error {
 public:
  EigenSolveError(const std::string& what, double s)
      : std::runtime_error(what), s_(s) {}
  double s() const noexcept { return s_; }

 private:
  double s_;
};

}  // namespace amp
