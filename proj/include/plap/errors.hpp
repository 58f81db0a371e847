#pragma once

#include <stdexcept>
#include <string>

namespace plap {

// Every failure mode the library reports. The C API maps these 1:1 onto
// plap_status codes; the CLI maps them onto exit codes.
enum class ErrorCode {
  InvalidArgument,
  Config,              // unknown kernel kind, bad kind parameters
  Dimension,           // mismatched or incommensurate resolutions
  Type,                // operation needs an indicator-valued kernel
  Domain,              // argument outside the mathematical domain (q < 1, t out of range, ...)
  Resolution,          // grid too coarse for the request (e.g. shift h < 1/n)
  Stability,           // explicit step diverged
  Convergence,         // iterative solve exhausted its budget
  Infeasible,          // datum violates the constraint set
  UndefinedDimension,  // box counting found no boundary cells
  DegenerateFit,       // too few usable points for a rate fit
  Parse,               // malformed config / CSV text
  Validation,          // structurally valid input with an out-of-range field
  Gate,                // a gated assertion in a config-driven run failed
  Io,
  Internal,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Config: return "config";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::Type: return "type";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Resolution: return "resolution";
    case ErrorCode::Stability: return "stability";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::UndefinedDimension: return "undefined_dimension";
    case ErrorCode::DegenerateFit: return "degenerate_fit";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Gate: return "gate";
    case ErrorCode::Io: return "io";
    case ErrorCode::Internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace plap
