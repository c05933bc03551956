#pragma once

#include "qtran/model.hpp"

namespace qtran::test {

// Symmetric resonant level: eps_d = mu0 = 0, Lambda_L = Lambda_R.
inline DeviceModel resonant_level(double lam = 0.1, double eps_d = 0.0) {
  return build_single_site(eps_d, lam, lam, 0.0);
}

inline BiasProfile right_bias(double delta_v, double rise = 0.1) {
  BiasProfile b;
  b.right = LeadBias::smooth_step(delta_v, rise);
  return b;
}

}  // namespace qtran::test
