#include "nlx/error.hpp"

namespace nlx {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EllipticityViolation: return "EllipticityViolation";
    case ErrorCode::BoundaryDivergence: return "BoundaryDivergence";
    case ErrorCode::UnsupportedGrid: return "UnsupportedGrid";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::TailDivergence: return "TailDivergence";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::ConstraintHit: return "ConstraintHit";
    case ErrorCode::InfeasibleStart: return "InfeasibleStart";
    case ErrorCode::NeedMoreRecords: return "NeedMoreRecords";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::MonotonicityViolation: return "MonotonicityViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace nlx
