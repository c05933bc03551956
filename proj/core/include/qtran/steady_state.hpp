#pragma once

#include <utility>
#include <vector>

#include "qtran/model.hpp"

namespace qtran {

struct Transmission {
  double scaled = 0.0;    // (2/pi) tr[G^r Lambda^R G^a Lambda^L]
  double standard = 0.0;  // 4 tr[Lambda^L G^r Lambda^R G^a], equals 2 pi * scaled
};

/// Wide-band transmission with G^{r,a} = (eps - h_inf +- i Lambda)^-1.
Transmission transmission_wbl(const DeviceModel& model, double eps, const CMatrix& h_inf);
/// Same with h_inf = h0 + dh_inf * I.
Transmission transmission_wbl(const DeviceModel& model, double eps, double dh_inf);

/// Spin-summed currents, consistent with the spin-summed density matrix; the
/// per-spin Landauer integral \int (f_L - f_R) T_scaled is half of j_L.
struct SteadyCurrent {
  double j_L = 0.0;  // e eV / hbar, current out of lead L into the device
  double j_R = 0.0;
  double j_L_uA = 0.0;
  double j_R_uA = 0.0;
  double mu_L = 0.0;
  double mu_R = 0.0;
};

/// Zero-temperature Landauer current at the settled bias. Lead alpha is filled up to
/// mu0 + settled level shift; h_inf follows the induced-Fock rule.
SteadyCurrent steady_current(const DeviceModel& model, const BiasProfile& bias, const InducedFockRule& rule,
                             double tol = 1e-10);

struct LeadLevel {
  double energy = 0.0;
  CMatrix gamma;  // coupling bilinear of the level
};

struct LeadLevelSet {
  std::vector<LeadLevel> levels;
  double delta = 1e-3;
};

/// Sigma^{r,a}(eps) = sum_l Gamma^l / (eps - eps_l +- i delta).
std::pair<CMatrix, CMatrix> sigma_lorentzian_sum(const LeadLevelSet& set, double eps);

/// tr[Gamma_L G^r Gamma_R G^a] with Gamma = i(Sigma^r - Sigma^a) and energy-dependent self-energies.
double transmission_general(const CMatrix& h, const CMatrix& sigma_r_L, const CMatrix& sigma_r_R, double eps);

}  // namespace qtran
