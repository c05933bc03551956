#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qtran {

/// Coarse failure category; the CLI prefixes messages with it and maps it to
/// an exit status.
enum class ErrorCategory { Config, Numeric, Io };

/// Specific failure kinds raised across the library.
enum class ErrorKind {
  DimensionMismatch,
  NonDiagonalizable,
  SpectrumOnAxis,
  KernelNonConvergent,
  NegativeLinewidth,
  OutOfTableRange,
  InvalidModel,
  InvalidBias,
  NotPsd,
  SingularResolvent,
  QuadratureNotConverged,
  GridTooCoarse,
  DegenerateSpectrum,
  StateCorrupt,
  NonFinite,
  DimensionTooLarge,
  DegenerateFermiLevel,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;
std::string_view to_string(ErrorCategory category) noexcept;
ErrorCategory category_of(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace qtran
