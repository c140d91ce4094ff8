#pragma once

#include <stdexcept>
#include <string>

namespace pathpref {

/// Malformed caller input: unknown ids, dimension mismatches, broken invariants.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario/planner configuration that cannot be planned on, e.g. a
/// negative combined edge cost.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Path enumeration exceeded its cap.
class InstanceTooLargeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two paths with identical violation vector and time cannot be compared.
class DegenerateHalfspaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Session protocol violation: feedback without a pending query, spent budget.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class BudgetExhaustedError : public ProtocolError {
 public:
  BudgetExhaustedError() : ProtocolError("budget exhausted") {}
};

/// Every region was ruled out (only reachable with an assumed accuracy of 1).
class ContradictoryFeedbackError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario or config document does not match its schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pathpref
