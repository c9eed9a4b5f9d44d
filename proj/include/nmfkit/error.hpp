#pragma once

#include <stdexcept>
#include <string>

namespace nmfkit {

enum class ErrorCode {
  shape_mismatch,
  invalid_argument,
  nonnegativity_violation,
  positivity_violation,   // zero denominator in a multiplicative update
  degenerate_factor,      // zero-norm column/row in a closed-form update
  undefined_scale,
  not_rank2,
  convergence_failure,
  internal_consistency,
  parse_error,
  io_error,
  instance_too_large,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::shape_mismatch: return "shape mismatch";
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::nonnegativity_violation: return "nonnegativity violation";
    case ErrorCode::positivity_violation: return "positivity violation";
    case ErrorCode::degenerate_factor: return "degenerate factor";
    case ErrorCode::undefined_scale: return "undefined scale";
    case ErrorCode::not_rank2: return "not rank 2";
    case ErrorCode::convergence_failure: return "convergence failure";
    case ErrorCode::internal_consistency: return "internal consistency";
    case ErrorCode::parse_error: return "parse error";
    case ErrorCode::io_error: return "io error";
    case ErrorCode::instance_too_large: return "instance too large";
  }
  return "unknown error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

inline void require(bool condition, ErrorCode code, const char* what) {
  if (!condition) throw Error(code, what);
}

}  // namespace detail

}  // namespace nmfkit
