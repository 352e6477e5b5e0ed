#include "shellvib/error.hpp"

namespace shellvib {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::QuadOnly: return "QuadOnly";
    case ErrorCode::NonManifold: return "NonManifold";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::UnsupportedTopology: return "UnsupportedTopology";
    case ErrorCode::IsolationFailed: return "IsolationFailed";
    case ErrorCode::BadGeometry: return "BadGeometry";
    case ErrorCode::FitSingular: return "FitSingular";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EvCornerSingular: return "EvCornerSingular";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateElement: return "DegenerateElement";
    case ErrorCode::IllConditionedRelaxation: return "IllConditionedRelaxation";
    case ErrorCode::AssemblyError: return "AssemblyError";
    case ErrorCode::BadConstraint: return "BadConstraint";
    case ErrorCode::SingularDielectric: return "SingularDielectric";
    case ErrorCode::EigenNoConvergence: return "EigenNoConvergence";
    case ErrorCode::SingularStiffness: return "SingularStiffness";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace shellvib
