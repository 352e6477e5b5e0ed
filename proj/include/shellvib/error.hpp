#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shellvib {

/// Failure categories reported by every module. The CLI prints the name in
/// its machine-readable error object.
enum class ErrorCode {
  QuadOnly,
  NonManifold,
  IndexOutOfRange,
  UnsupportedTopology,
  IsolationFailed,
  BadGeometry,
  FitSingular,
  DomainError,
  EvCornerSingular,
  NoConvergence,
  DegenerateElement,
  IllConditionedRelaxation,
  AssemblyError,
  BadConstraint,
  SingularDielectric,
  EigenNoConvergence,
  SingularStiffness,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shellvib
