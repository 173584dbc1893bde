#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace heatlab {

enum class ErrorKind {
  SupercriticalParameter,
  DegenerateDimension,
  InvalidProfile,
  NotNonnegative,
  AmbiguousTail,
  OutOfRange,
  GridMismatch,
  ConvergenceFailure,
  SolverError,
  NumericalBlowup,
  DomainExhausted,
  NeedMoreCheckpoints,
  ResolutionError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries its kind so the CLI can map
/// it to an exit code and the orchestrator can name the failing stage.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

/// Writes a warning line to stderr unless warnings are silenced.
void warn(const std::string& message);
void set_warnings_enabled(bool enabled);
/// Warnings issued since the last call, oldest first.
std::vector<std::string> take_warnings();

}  // namespace heatlab
