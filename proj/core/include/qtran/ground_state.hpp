#pragma once

#include "qtran/model.hpp"

namespace qtran {

inline constexpr double kDefaultEpsMin = -1000.0;

struct GroundState {
  CMatrix sigma0;  // spin-summed, eigenvalues in [0, 2]
  double mu0 = 0.0;
  int panels = 0;
  double refinement_change = 0.0;
};

/// (eps - h0 + i Lambda)^-1
CMatrix retarded_gf0(const DeviceModel& model, double eps);

/// sigma(0) = (2/pi) \int_{-inf}^{mu0} G^r Lambda G^a. The interval [eps_min, mu0] is done by
/// composite Gauss-Legendre on a mesh graded around the resonances, refined by panel doubling
/// from n_quad subdivisions; the remainder below eps_min is added analytically.
GroundState ground_state_density(const DeviceModel& model, double eps_min = kDefaultEpsMin, int n_quad = 2);

}  // namespace qtran
