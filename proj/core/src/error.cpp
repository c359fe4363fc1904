#include "nematic/error.hpp"

namespace nematic {

std::string_view error_label(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::GridMismatch: return "grid-mismatch";
    case ErrorCode::NonFinite: return "non-finite";
    case ErrorCode::TemperaturePositivity: return "temperature-positivity";
    case ErrorCode::SingularDirector: return "singular-director";
    case ErrorCode::ConstitutiveInconsistency: return "constitutive-inconsistency";
    case ErrorCode::Config: return "config";
    case ErrorCode::Ellipticity: return "ellipticity";
    case ErrorCode::BlowUp: return "blow-up";
    case ErrorCode::ConstraintViolation: return "constraint-violation";
    case ErrorCode::PicardNonConvergence: return "picard-non-convergence";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::InvalidArgument:
    case ErrorCode::Io:
      return 2;
    case ErrorCode::Ellipticity:
      return 3;
    case ErrorCode::PicardNonConvergence:
      return 5;
    default:
      return 4;
  }
}

}  // namespace nematic
