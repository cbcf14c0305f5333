#include "fibra/error.hpp"

namespace fibra {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::InvalidTopology: return "InvalidTopology";
    case ErrorCode::InvalidFilter: return "InvalidFilter";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::EmptyImageBase: return "EmptyImageBase";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::InvalidAlgebra: return "InvalidAlgebra";
    case ErrorCode::InvalidBundle: return "InvalidBundle";
    case ErrorCode::NotContained: return "NotContained";
    case ErrorCode::BaseMismatch: return "BaseMismatch";
    case ErrorCode::BundleMismatch: return "BundleMismatch";
    case ErrorCode::EmptyFiber: return "EmptyFiber";
    case ErrorCode::MissingTrivialization: return "MissingTrivialization";
    case ErrorCode::NonInjectiveBase: return "NonInjectiveBase";
    case ErrorCode::SingularFiber: return "SingularFiber";
    case ErrorCode::NotEndorelation: return "NotEndorelation";
    case ErrorCode::PartialDomain: return "PartialDomain";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::NotAnEquivalence: return "NotAnEquivalence";
    case ErrorCode::InvalidMorphism: return "InvalidMorphism";
    case ErrorCode::InvalidGroup: return "InvalidGroup";
    case ErrorCode::InvalidAction: return "InvalidAction";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::SectionMismatch: return "SectionMismatch";
    case ErrorCode::BrokenChain: return "BrokenChain";
    case ErrorCode::EnumerationBound: return "EnumerationBound";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::UnknownObject: return "UnknownObject";
  }
  return "Unknown";
}

}  // namespace fibra
