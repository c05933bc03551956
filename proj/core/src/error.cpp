#include "qtran/error.hpp"

namespace qtran {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonDiagonalizable: return "NonDiagonalizable";
    case ErrorKind::SpectrumOnAxis: return "SpectrumOnAxis";
    case ErrorKind::KernelNonConvergent: return "KernelNonConvergent";
    case ErrorKind::NegativeLinewidth: return "NegativeLinewidth";
    case ErrorKind::OutOfTableRange: return "OutOfTableRange";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::InvalidBias: return "InvalidBias";
    case ErrorKind::NotPsd: return "NotPSD";
    case ErrorKind::SingularResolvent: return "SingularResolvent";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::StateCorrupt: return "StateCorrupt";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::DegenerateFermiLevel: return "DegenerateFermiLevel";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

std::string_view to_string(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::Config: return "CONFIG";
    case ErrorCategory::Numeric: return "NUMERIC";
    case ErrorCategory::Io: return "IO";
  }
  return "NUMERIC";
}

ErrorCategory category_of(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::InvalidModel:
    case ErrorKind::InvalidBias:
    case ErrorKind::NegativeLinewidth:
    case ErrorKind::OutOfTableRange:
      return ErrorCategory::Config;
    case ErrorKind::IoError:
      return ErrorCategory::Io;
    default:
      return ErrorCategory::Numeric;
  }
}

}  // namespace qtran
