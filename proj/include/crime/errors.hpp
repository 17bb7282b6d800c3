#pragma once

#include <stdexcept>
#include <string>

namespace crime {

// Invalid argument values / model-domain violations (negative density, v <= 0, ...).
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// API misuse: empty record sets, mismatched grids, windows outside a trajectory, ...
struct UsageError : std::logic_error {
  explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

// Config-file problems; message carries file/line context.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the stepper when dt underflows dt_min while rejecting steps.
struct StepFailure : std::runtime_error {
  explicit StepFailure(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the stepper when v falls to the degeneracy guard.
struct DegeneracyError : std::runtime_error {
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values or a linear solve that cannot reach tolerance.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crime
