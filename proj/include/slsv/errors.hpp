#pragma once

#include <stdexcept>
#include <string>

namespace slsv {

/// Invalid user-supplied parameters (degree, mesh size, config keys).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The numerical method could not complete a step (crossing characteristics,
/// singular field system, positivity lost before limiting).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A diagnostic could not be evaluated (too few peaks for a rate fit).
class DiagnosticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace slsv
