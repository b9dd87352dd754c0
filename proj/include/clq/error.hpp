#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clq {

enum class ErrorCode {
  NotPrime,
  DegreeTooLarge,
  NoPrimitivePoly,
  InvalidQ,
  FieldTooLarge,
  IdentityViolation,
  ModelViolation,
  SizeMismatch,
  PartitionInconsistent,
  NotTactical,
  HMismatch,
  LiftFailure,
  AssemblyMismatch,
  OrbitMismatch,
  FrameFailure,
  NotOnQuadric,
  BadTransform,
  NotIncident,
  CriterionMismatch,
  PatternViolation,
  NotConstantOnOrbit,
  NotTwoIntersection,
  StabilizerViolation,
  BadFlag,
  BadArtifact,
  ResourceCap,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::NoPrimitivePoly: return "NoPrimitivePoly";
    case ErrorCode::InvalidQ: return "InvalidQ";
    case ErrorCode::FieldTooLarge: return "FieldTooLarge";
    case ErrorCode::IdentityViolation: return "IdentityViolation";
    case ErrorCode::ModelViolation: return "ModelViolation";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::PartitionInconsistent: return "PartitionInconsistent";
    case ErrorCode::NotTactical: return "NotTactical";
    case ErrorCode::HMismatch: return "HMismatch";
    case ErrorCode::LiftFailure: return "LiftFailure";
    case ErrorCode::AssemblyMismatch: return "AssemblyMismatch";
    case ErrorCode::OrbitMismatch: return "OrbitMismatch";
    case ErrorCode::FrameFailure: return "FrameFailure";
    case ErrorCode::NotOnQuadric: return "NotOnQuadric";
    case ErrorCode::BadTransform: return "BadTransform";
    case ErrorCode::NotIncident: return "NotIncident";
    case ErrorCode::CriterionMismatch: return "CriterionMismatch";
    case ErrorCode::PatternViolation: return "PatternViolation";
    case ErrorCode::NotConstantOnOrbit: return "NotConstantOnOrbit";
    case ErrorCode::NotTwoIntersection: return "NotTwoIntersection";
    case ErrorCode::StabilizerViolation: return "StabilizerViolation";
    case ErrorCode::BadFlag: return "BadFlag";
    case ErrorCode::BadArtifact: return "BadArtifact";
    case ErrorCode::ResourceCap: return "ResourceCap";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto process exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace clq
