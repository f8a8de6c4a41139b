#pragma once

#include <stdexcept>
#include <string>

namespace lightning {

enum class ErrorKind {
  Domain,            // argument outside the mathematical domain
  Singularity,       // evaluation at a removable/true singularity
  InvalidPolicy,     // bad precision policy
  Format,            // unparseable decimal / malformed text
  OracleFailure,     // reference quadrature did not converge
  InsufficientData,  // too few points for a fit
  Load,              // approximant document failed validation
  Io,                // file system failure
  Usage              // command-line misuse
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::InvalidPolicy: return "invalid precision policy";
    case ErrorKind::Format: return "format error";
    case ErrorKind::OracleFailure: return "oracle failure";
    case ErrorKind::InsufficientData: return "insufficient data";
    case ErrorKind::Load: return "load error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Usage: return "usage error";
  }
  return "error";
}

/// Single exception type for the library; `kind()` selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Same kind, message prefixed with `context: `.
  Error with_context(const std::string& context) const {
    return Error(kind_, context + ": " + what());
  }

 private:
  ErrorKind kind_;
};

}  // namespace lightning
