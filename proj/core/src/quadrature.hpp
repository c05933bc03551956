#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "qtran/matrix.hpp"

namespace qtran::detail {

/// Breakpoints on [lo, hi] clustered geometrically around the real parts of the poles.
inline std::vector<double> graded_mesh(const CVector& poles, double lo, double hi) {
  std::vector<double> pts{lo, hi};
  for (Eigen::Index k = 0; k < poles.size(); ++k) {
    const double c = poles(k).real();
    const double w = std::max(std::abs(poles(k).imag()), 1e-6);
    if (c > lo && c < hi) pts.push_back(c);
    for (double d = 0.25 * w; d < (hi - lo); d *= 2.0) {
      if (c - d > lo && c - d < hi) pts.push_back(c - d);
      if (c + d > lo && c + d < hi) pts.push_back(c + d);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
            pts.end());
  return pts;
}

/// 10-point Gauss-Legendre on every mesh interval split into `sub` equal panels.
template <class F, class T>
T composite_gauss(const F& f, const std::vector<double>& mesh, int sub, T acc) {
  using Rule = boost::math::quadrature::gauss<double, 10>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  for (std::size_t p = 0; p + 1 < mesh.size(); ++p) {
    const double h = (mesh[p + 1] - mesh[p]) / sub;
    for (int s = 0; s < sub; ++s) {
      const double mid = mesh[p] + (s + 0.5) * h;
      const double half = 0.5 * h;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
          acc += (w[i] * half) * f(mid);
        } else {
          acc += (w[i] * half) * (f(mid - half * x[i]) + f(mid + half * x[i]));
        }
      }
    }
  }
  return acc;
}

}  // namespace qtran::detail
