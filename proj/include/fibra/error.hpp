#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fibra {

/// Every domain failure the engine reports. The CLI prints the code name
/// verbatim, so renaming an enumerator is a format change.
enum class ErrorCode {
  LabelMismatch,
  SpaceMismatch,
  InvalidTopology,
  InvalidFilter,
  EmptyTarget,
  EmptyImageBase,
  ShapeMismatch,
  SignatureMismatch,
  InvalidAlgebra,
  InvalidBundle,
  NotContained,
  BaseMismatch,
  BundleMismatch,
  EmptyFiber,
  MissingTrivialization,
  NonInjectiveBase,
  SingularFiber,
  NotEndorelation,
  PartialDomain,
  ArityMismatch,
  NotAnEquivalence,
  InvalidMorphism,
  InvalidGroup,
  InvalidAction,
  UnknownPoint,
  UnknownElement,
  SectionMismatch,
  BrokenChain,
  EnumerationBound,
  CapacityExceeded,
  ParseError,
  InvariantViolation,
  UnknownObject,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fibra
