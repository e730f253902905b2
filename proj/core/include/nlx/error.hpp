#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlx {

enum class ErrorCode {
  DomainError,
  InvalidArgument,
  EllipticityViolation,
  BoundaryDivergence,
  UnsupportedGrid,
  GridMismatch,
  TailDivergence,
  ConstraintViolation,
  NoSolution,
  ConstraintHit,
  InfeasibleStart,
  NeedMoreRecords,
  NumericalFailure,
  MonotonicityViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this type; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nlx
