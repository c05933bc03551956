#pragma once

#include <array>

#include "qtran/model.hpp"

namespace qtran {

/// Causality-transformed lead self-energies split into Hermitian parts:
///   tilde Sigma^< = -gamma_plus + i lambda_plus,  tilde Sigma^> = gamma_minus - i lambda_minus.
/// lambda_* carry the sharp lead windows (broadening), gamma_* the principal-value logs (shifts).
struct CausalityTransforms {
  CMatrix gamma_plus;
  CMatrix gamma_minus;
  CMatrix lambda_plus;
  CMatrix lambda_minus;

  CMatrix sigma_lesser() const;   // tilde Sigma^<
  CMatrix sigma_greater() const;  // tilde Sigma^>
};

/// Zero-temperature wide-band lead: occupied window (lo, mu), empty window (mu, hi).
struct LeadWindow {
  double lo = 0.0;
  double mu = 0.0;
  double hi = 0.0;
};

LeadWindow symmetric_window(double mu0, double eps_min, double level_shift = 0.0);

/// Transforms for a constant Hermitian h and line-width lambda_a.
CausalityTransforms causality_transforms(const CMatrix& h, const CMatrix& lambda_a, const LeadWindow& window);
/// Uses h0 and the unshifted window of the model.
CausalityTransforms causality_transforms(const DeviceModel& model, Lead lead, double eps_min);

/// [A, B]^dagger = AB - B^dagger A^dagger
CMatrix dagger_commutator(const CMatrix& a, const CMatrix& b);

/// Q for spin-summed sigma; the algebra runs on sigma/2 and the result is doubled.
CMatrix cso_q(const CMatrix& sigma, const CausalityTransforms& ct);
/// Same quantity from the shift-commutator and broadening-anticommutator expansion.
CMatrix cso_q_expanded(const CMatrix& sigma, const CausalityTransforms& ct);

/// One-shot level-shift dressing h + sum over leads of (gamma_plus + gamma_minus).
CMatrix scba_dressed_h(const CMatrix& h, const std::array<CausalityTransforms, 2>& ct);

/// Principal-value lead-window kernels for a single energy e.
cplx cso_lesser_kernel(double e, const LeadWindow& w);
cplx cso_greater_kernel(double e, const LeadWindow& w);

}  // namespace qtran
