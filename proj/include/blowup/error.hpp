#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blowup {

enum class ErrorKind {
  Domain,
  DivergentIntegral,
  OutOfRange,
  NonIntegerDimension,
  Evaluation,
  Instability,
  InsufficientResolution,
  InsufficientRange,
  ConeOutsideDomain,
  Extrapolation,
  NonIntegrableWeight,
  StepUnderflow,
  Precondition,
  DegenerateFamily,
  Validation,
  MissingStage,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::DivergentIntegral: return "divergent integral";
    case ErrorKind::OutOfRange: return "out of range";
    case ErrorKind::NonIntegerDimension: return "non-integer dimension";
    case ErrorKind::Evaluation: return "evaluation error";
    case ErrorKind::Instability: return "instability";
    case ErrorKind::InsufficientResolution: return "insufficient resolution";
    case ErrorKind::InsufficientRange: return "insufficient range";
    case ErrorKind::ConeOutsideDomain: return "cone outside domain";
    case ErrorKind::Extrapolation: return "extrapolation";
    case ErrorKind::NonIntegrableWeight: return "non-integrable weight";
    case ErrorKind::StepUnderflow: return "step underflow";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::DegenerateFamily: return "degenerate family";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::MissingStage: return "missing stage";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

}  // namespace blowup
