#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nematic {

enum class ErrorCode {
  InvalidArgument,
  GridMismatch,
  NonFinite,
  TemperaturePositivity,
  SingularDirector,
  ConstitutiveInconsistency,
  Config,
  Ellipticity,
  BlowUp,
  ConstraintViolation,
  PicardNonConvergence,
  Io,
};

/// Stable lowercase label used in machine-readable error lines.
std::string_view error_label(ErrorCode code);

/// Process exit status for an error reaching the command line.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace nematic
