#include "qtran/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qtran/error.hpp"
#include "quadrature.hpp"

namespace qtran {

namespace {

constexpr double kTolerance = 1e-8;
constexpr int kMaxRefinements = 8;

CMatrix integrand(const DeviceModel& model, const CMatrix& lam, double eps) {
  const CMatrix g = retarded_gf0(model, eps);
  return g * lam * g.adjoint();
}

}  // namespace

CMatrix retarded_gf0(const DeviceModel& model, double eps) {
  const int n = model.n_orb;
  const CMatrix m = cplx(eps) * CMatrix::Identity(n, n) - model.h0 + kI * model.lambda_total();
  Eigen::PartialPivLU<CMatrix> lu(m);
  if (!(lu.rcond() > 1e-14)) {
    throw Error(ErrorKind::SingularResolvent, "resolvent singular at eps = " + std::to_string(eps));
  }
  return lu.inverse();
}

GroundState ground_state_density(const DeviceModel& model, double eps_min, int n_quad) {
  model.validate();
  const CMatrix lam = model.lambda_total();
  if (max_abs(lam) == 0.0) throw Error(ErrorKind::InvalidModel, "ground state needs a nonzero line-width");
  if (!(eps_min < model.mu0) || !(eps_min < 0.0)) {
    throw Error(ErrorKind::InvalidModel, "eps_min must be negative and below mu0");
  }
  const int n = model.n_orb;
  const EigenDecomposition ed = eig(model.h0 - kI * lam);
  const std::vector<double> mesh = detail::graded_mesh(ed.values, eps_min, model.mu0);

  auto density = [&](double e) { return integrand(model, lam, e); };
  const CMatrix zero = CMatrix::Zero(n, n);
  int sub = std::max(1, n_quad);
  CMatrix prev = detail::composite_gauss(density, mesh, sub, zero);
  double change = 0.0;
  bool converged = false;
  for (int r = 0; r < kMaxRefinements; ++r) {
    sub *= 2;
    CMatrix next = detail::composite_gauss(density, mesh, sub, zero);
    change = max_abs(next - prev) * 2.0 / M_PI;
    prev = std::move(next);
    if (change <= kTolerance) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorKind::QuadratureNotConverged,
                "ground-state quadrature changed by " + std::to_string(change) + " on refinement");
  }

  // G^r Lambda G^a = (G^a - G^r) / 2i, so the part below eps_min follows from log kernels.
  CVector f(n);
  for (int k = 0; k < n; ++k) f(k) = std::log(cplx(eps_min) - ed.values(k)) - kI * M_PI;
  const CMatrix t = ed.apply(f);
  const CMatrix tail = (t.adjoint() - t) / (2.0 * kI);

  GroundState gs;
  gs.sigma0 = hermitian_part((2.0 / M_PI) * (prev + tail));
  gs.mu0 = model.mu0;
  gs.panels = static_cast<int>(mesh.size() - 1) * sub;
  gs.refinement_change = change;
  return gs;
}

}  // namespace qtran
