#pragma once

#include <array>

#include "qtran/ground_state.hpp"
#include "qtran/model.hpp"

namespace qtran {

/// Snapshot of the quantities the wide-band dissipator needs at time t.
struct WblState {
  double t = 0.0;                              // fs
  CMatrix phase_h;                             // \int_0^t h(tau) dtau, eV fs
  std::array<double, 2> phase_bias{0.0, 0.0};  // \int_0^t level shift per lead, eV fs
  CMatrix u_minus;                             // exp(-i phase_h / hbar - Lambda t / hbar)
  CMatrix h_now;                               // h(t)
  std::array<double, 2> level_shift{0.0, 0.0};
};

enum class PPlusKind { Adiabatic, Exact };

struct DissipatorOutput {
  std::array<CMatrix, 2> q;  // Q_L, Q_R (eV)
  std::array<CMatrix, 2> k;  // K_L, K_R (eV)
};

inline std::size_t lead_index(Lead lead) { return lead == Lead::L ? 0 : 1; }

class WblDissipator {
 public:
  WblDissipator(DeviceModel model, BiasProfile bias, InducedFockRule rule, double eps_min = kDefaultEpsMin);

  WblState state_at(double t) const;

  CMatrix p_minus(const WblState& s, Lead lead) const;
  CMatrix p_plus_adiabatic(const WblState& s, Lead lead) const;
  /// Time-domain evaluation of the exact memory integral. Only its Hermitian part,
  /// 2 Re-part of the returned matrix, is regularization independent; the returned
  /// matrix is therefore K^(+) = P^(+) + P^(+)dagger.
  CMatrix k_plus_exact(const WblState& s, Lead lead, double tol = 1e-10) const;
  CMatrix k_plus_adiabatic(const WblState& s, Lead lead) const;

  /// K = P + P^dagger with P = P^(-) + P^(+).
  CMatrix k_term(const WblState& s, Lead lead, PPlusKind kind = PPlusKind::Adiabatic) const;
  DissipatorOutput dissipator(const WblState& s, const CMatrix& sigma, PPlusKind kind = PPlusKind::Adiabatic) const;
  DissipatorOutput dissipator_from_k(const std::array<CMatrix, 2>& k, const CMatrix& sigma) const;

  /// Settled-bias limit of P for lead alpha.
  CMatrix p_steady(Lead lead) const;
  CMatrix k_steady(Lead lead) const;
  CMatrix h_settled() const;

  const DeviceModel& model() const { return model_; }
  const BiasProfile& bias() const { return bias_; }
  const InducedFockRule& rule() const { return rule_; }
  double eps_min() const { return eps_min_; }

 private:
  // Prefactor -2i/pi.
  static cplx pref();
  CMatrix propagator_v(double t, double tau, Lead lead) const;
  double scalar_phase(double t) const;

  DeviceModel model_;
  BiasProfile bias_;
  InducedFockRule rule_;
  double eps_min_;
  CMatrix lambda_;
  EigenDecomposition ed0_;  // of h0 - i Lambda
};

}  // namespace qtran
