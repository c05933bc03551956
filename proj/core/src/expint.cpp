#include <cmath>
#include <limits>

#include "qtran/error.hpp"
#include "qtran/matrix.hpp"

namespace qtran {

namespace {

constexpr double kTolerance = 1e-12;
constexpr double kSeriesRadius = 4.0;
constexpr int kMaxIterations = 20000;
constexpr double kEulerGamma = 0.57721566490153286061;

// E1 by its convergent power series.
cplx exp1_series(cplx x) {
  cplx sum = 0.0;
  cplx term = 1.0;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= -x / double(n);
    const cplx add = term / double(n);
    sum += add;
    if (std::abs(add) <= 1e-16 * (1.0 + std::abs(sum))) {
      return -kEulerGamma - std::log(x) - sum;
    }
  }
  throw Error(ErrorKind::KernelNonConvergent, "E1 series did not converge");
}

// e^x E1(x) by modified Lentz evaluation of the continued fraction.
cplx scaled_exp1_cf(cplx x) {
  constexpr double tiny = 1e-300;
  cplx b = x + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -double(i) * double(i);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < kTolerance * 1e-2) return h;
  }
  throw Error(ErrorKind::KernelNonConvergent, "E1 continued fraction did not converge");
}

}  // namespace

cplx exp1(cplx x) {
  if (std::abs(x) < kSeriesRadius) return exp1_series(x);
  return scaled_exp1_cf(x) * std::exp(-x);
}

cplx scaled_exp1(cplx x) {
  if (std::abs(x) < kSeriesRadius) return std::exp(x) * exp1_series(x);
  return scaled_exp1_cf(x);
}

cplx osc_kernel(cplx z, double mu0, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::DimensionMismatch, "oscillatory kernel needs t > 0");
  if (z.imag() >= -1e-14) throw Error(ErrorKind::SpectrumOnAxis, "pole on the real axis");
  const cplx x = -kI * t * (cplx(mu0) - z);
  const cplx value = -std::exp(kI * mu0 * t) * scaled_exp1(x);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw Error(ErrorKind::KernelNonConvergent, "non-finite oscillatory kernel");
  }
  return value;
}

}  // namespace qtran
