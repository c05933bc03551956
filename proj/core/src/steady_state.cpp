#include "qtran/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtran/error.hpp"
#include "qtran/units.hpp"
#include "quadrature.hpp"

namespace qtran {

namespace {

constexpr double kSpin = 2.0;

CMatrix solve_resolvent(const CMatrix& m, double eps) {
  Eigen::PartialPivLU<CMatrix> lu(m);
  if (!(lu.rcond() > 1e-14)) {
    throw Error(ErrorKind::SingularResolvent, "resolvent singular at eps = " + std::to_string(eps));
  }
  return lu.inverse();
}

}  // namespace

Transmission transmission_wbl(const DeviceModel& model, double eps, const CMatrix& h_inf) {
  const int n = model.n_orb;
  const CMatrix gr =
      solve_resolvent(cplx(eps) * CMatrix::Identity(n, n) - h_inf + kI * model.lambda_total(), eps);
  const CMatrix ga = gr.adjoint();
  const double tr = (gr * model.lambda_R * ga * model.lambda_L).trace().real();
  return Transmission{2.0 / M_PI * tr, 4.0 * tr};
}

Transmission transmission_wbl(const DeviceModel& model, double eps, double dh_inf) {
  return transmission_wbl(model, eps, model.h0 + dh_inf * CMatrix::Identity(model.n_orb, model.n_orb));
}

SteadyCurrent steady_current(const DeviceModel& model, const BiasProfile& bias, const InducedFockRule& rule,
                             double tol) {
  model.validate();
  const CMatrix h_inf = model.h0 + rule.delta_h_settled(bias, model.n_orb);
  SteadyCurrent out;
  out.mu_L = model.mu0 + bias.left.settled_level_shift();
  out.mu_R = model.mu0 + bias.right.settled_level_shift();
  const double lo = std::min(out.mu_L, out.mu_R);
  const double hi = std::max(out.mu_L, out.mu_R);
  if (hi > lo && max_abs(model.lambda_L) > 0.0 && max_abs(model.lambda_R) > 0.0) {
    const CVector poles = eig(h_inf - kI * model.lambda_total()).values;
    const std::vector<double> mesh = detail::graded_mesh(poles, lo, hi);
    auto t_of = [&](double e) { return transmission_wbl(model, e, h_inf).scaled; };
    int sub = 1;
    double prev = detail::composite_gauss(t_of, mesh, sub, 0.0);
    bool converged = false;
    for (int r = 0; r < 10; ++r) {
      sub *= 2;
      const double next = detail::composite_gauss(t_of, mesh, sub, 0.0);
      const double change = std::abs(next - prev);
      prev = next;
      if (change <= tol * std::max(1e-3, std::abs(next))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw Error(ErrorKind::QuadratureNotConverged, "Landauer integral did not converge");
    // f_L - f_R is +1 on (mu_R, mu_L) and -1 on (mu_L, mu_R).
    out.j_L = kSpin * (out.mu_L > out.mu_R ? prev : -prev);
  }
  out.j_R = -out.j_L;
  out.j_L_uA = units::to_micro_amp(out.j_L);
  out.j_R_uA = units::to_micro_amp(out.j_R);
  return out;
}

std::pair<CMatrix, CMatrix> sigma_lorentzian_sum(const LeadLevelSet& set, double eps) {
  if (!(set.delta > 0.0)) throw Error(ErrorKind::ValidationError, "broadening delta must be positive");
  if (set.levels.empty()) throw Error(ErrorKind::ValidationError, "lead level set is empty");
  const Eigen::Index n = set.levels.front().gamma.rows();
  CMatrix sr = CMatrix::Zero(n, n);
  for (const LeadLevel& l : set.levels) {
    if (l.gamma.rows() != n || l.gamma.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "lead level couplings differ in dimension");
    }
    sr += l.gamma / (cplx(eps - l.energy, set.delta));
  }
  return {sr, sr.adjoint()};
}

double transmission_general(const CMatrix& h, const CMatrix& sigma_r_L, const CMatrix& sigma_r_R, double eps) {
  const Eigen::Index n = h.rows();
  const CMatrix gr = solve_resolvent(cplx(eps) * CMatrix::Identity(n, n) - h - sigma_r_L - sigma_r_R, eps);
  const CMatrix gam_L = kI * (sigma_r_L - sigma_r_L.adjoint());
  const CMatrix gam_R = kI * (sigma_r_R - sigma_r_R.adjoint());
  return (gam_L * gr * gam_R * gr.adjoint()).trace().real();
}

}  // namespace qtran
