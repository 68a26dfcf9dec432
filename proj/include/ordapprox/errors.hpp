#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ordapprox {

/// Typed domain failures. The name is surfaced verbatim by the CLI.
enum class ErrorKind {
  DegenerateRational,
  MixedField,
  DivisionByZero,
  PrecisionExhausted,
  RationalTarget,
  InsufficientDepth,
  GammaOnOrbit,
  OutOfRegime,
  SingularSystem,
  InsufficientPairs,
  BlowUp,
  NotPeriodic,
  OrbitLeavesQuadrant,
  PreconditionFailed,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateRational: return "DegenerateRational";
    case ErrorKind::MixedField: return "MixedField";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::RationalTarget: return "RationalTarget";
    case ErrorKind::InsufficientDepth: return "InsufficientDepth";
    case ErrorKind::GammaOnOrbit: return "GammaOnOrbit";
    case ErrorKind::OutOfRegime: return "OutOfRegime";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::InsufficientPairs: return "InsufficientPairs";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::NotPeriodic: return "NotPeriodic";
    case ErrorKind::OrbitLeavesQuadrant: return "OrbitLeavesQuadrant";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
  }
  return "Unknown";
}

class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw DomainError(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace ordapprox
