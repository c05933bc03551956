#include "qtran/cso.hpp"

#include <cmath>

#include "qtran/error.hpp"

namespace qtran {

namespace {

constexpr double kEdgeShift = 1e-9;
constexpr double kDegenerate = 1e-12;

double indicator(double e, double a, double b) {
  if (e > a && e < b) return 1.0;
  if (e == a || e == b) return 0.5;
  return 0.0;
}

double away_from(double e, double edge) {
  return std::abs(e - edge) < kEdgeShift ? edge + (e >= edge ? kEdgeShift : -kEdgeShift) : e;
}

void check_mu(double e, double mu) {
  if (std::abs(e - mu) < kDegenerate) {
    throw Error(ErrorKind::DegenerateSpectrum, "eigenvalue coincides with the lead chemical potential");
  }
}

CMatrix in_eigenbasis(const CMatrix& h, const LeadWindow& w, cplx (*kernel)(double, const LeadWindow&)) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(h));
  const Eigen::VectorXd& e = solver.eigenvalues();
  CVector f(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) f(k) = kernel(e(k), w);
  const CMatrix& s = solver.eigenvectors();
  return s * f.asDiagonal() * s.adjoint();
}

}  // namespace

CMatrix CausalityTransforms::sigma_lesser() const { return -gamma_plus + kI * lambda_plus; }
CMatrix CausalityTransforms::sigma_greater() const { return gamma_minus - kI * lambda_minus; }

LeadWindow symmetric_window(double mu0, double eps_min, double level_shift) {
  const double half = std::abs(eps_min);
  return LeadWindow{mu0 - half, mu0 + level_shift, mu0 + half};
}

cplx cso_lesser_kernel(double e, const LeadWindow& w) {
  check_mu(e, w.mu);
  const double el = away_from(e, w.lo);
  return kI * indicator(e, w.lo, w.mu) - (std::log(std::abs(el - w.lo)) - std::log(std::abs(e - w.mu))) / M_PI;
}

cplx cso_greater_kernel(double e, const LeadWindow& w) {
  check_mu(e, w.mu);
  const double eh = away_from(e, w.hi);
  return -kI * indicator(e, w.mu, w.hi) + (std::log(std::abs(e - w.mu)) - std::log(std::abs(eh - w.hi))) / M_PI;
}

CausalityTransforms causality_transforms(const CMatrix& h, const CMatrix& lambda_a, const LeadWindow& window) {
  require_square(h, "h");
  if (lambda_a.rows() != h.rows() || lambda_a.cols() != h.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "line-width and h dimensions disagree");
  }
  if (!(window.lo < window.mu && window.mu < window.hi)) {
    throw Error(ErrorKind::InvalidModel, "lead window must satisfy lo < mu < hi");
  }
  const CMatrix xl = lambda_a * in_eigenbasis(h, window, cso_lesser_kernel);
  const CMatrix xg = lambda_a * in_eigenbasis(h, window, cso_greater_kernel);
  CausalityTransforms ct;
  ct.gamma_plus = -0.5 * (xl + xl.adjoint());
  ct.lambda_plus = (xl - xl.adjoint()) / (2.0 * kI);
  ct.gamma_minus = 0.5 * (xg + xg.adjoint());
  ct.lambda_minus = -(xg - xg.adjoint()) / (2.0 * kI);
  return ct;
}

CausalityTransforms causality_transforms(const DeviceModel& model, Lead lead, double eps_min) {
  return causality_transforms(model.h0, model.lambda(lead), symmetric_window(model.mu0, eps_min));
}

CMatrix dagger_commutator(const CMatrix& a, const CMatrix& b) { return a * b - b.adjoint() * a.adjoint(); }

CMatrix cso_q(const CMatrix& sigma, const CausalityTransforms& ct) {
  const CMatrix s = 0.5 * sigma;
  const CMatrix sbar = CMatrix::Identity(s.rows(), s.cols()) - s;
  return 2.0 * kI * (dagger_commutator(ct.sigma_greater(), s) + dagger_commutator(ct.sigma_lesser(), sbar));
}

CMatrix cso_q_expanded(const CMatrix& sigma, const CausalityTransforms& ct) {
  const CMatrix s = 0.5 * sigma;
  const CMatrix sbar = CMatrix::Identity(s.rows(), s.cols()) - s;
  auto comm = [](const CMatrix& a, const CMatrix& b) -> CMatrix { return a * b - b * a; };
  auto anti = [](const CMatrix& a, const CMatrix& b) -> CMatrix { return a * b + b * a; };
  const CMatrix q = kI * comm(ct.gamma_minus, s) + anti(ct.lambda_minus, s) - kI * comm(ct.gamma_plus, sbar) -
                    anti(ct.lambda_plus, sbar);
  return 2.0 * q;
}

CMatrix scba_dressed_h(const CMatrix& h, const std::array<CausalityTransforms, 2>& ct) {
  CMatrix out = h;
  for (const auto& c : ct) out += c.gamma_plus + c.gamma_minus;
  return out;
}

}  // namespace qtran
