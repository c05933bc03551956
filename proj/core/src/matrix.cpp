#include "qtran/matrix.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qtran/error.hpp"

namespace qtran {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kAxisTolerance = -1e-14;

void require_lower_half_plane(const CVector& values) {
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values(k).imag() >= kAxisTolerance) {
      throw Error(ErrorKind::SpectrumOnAxis,
                  "eigenvalue " + std::to_string(values(k).real()) + "+" +
                      std::to_string(values(k).imag()) + "i is not below the real axis");
    }
  }
}

}  // namespace

CMatrix EigenDecomposition::reconstruct() const {
  return vectors * values.asDiagonal() * inverse_vectors;
}

CMatrix EigenDecomposition::apply(const CVector& f) const {
  return vectors * f.asDiagonal() * inverse_vectors;
}

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

EigenDecomposition eig(const CMatrix& a) {
  require_square(a, "eig input");
  Eigen::ComplexEigenSolver<CMatrix> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonDiagonalizable, "eigenvalue iteration failed");
  }
  EigenDecomposition ed;
  ed.values = solver.eigenvalues();
  ed.vectors = solver.eigenvectors();
  Eigen::PartialPivLU<CMatrix> lu(ed.vectors);
  ed.inverse_vectors = lu.inverse();
  const double cond = ed.vectors.cwiseAbs().colwise().sum().maxCoeff() *
                      ed.inverse_vectors.cwiseAbs().colwise().sum().maxCoeff();
  if (!std::isfinite(cond) || cond > kMaxCondition) {
    throw Error(ErrorKind::NonDiagonalizable,
                "eigenvector matrix condition number " + std::to_string(cond) + " exceeds 1e12");
  }
  return ed;
}

CMatrix expm(const CMatrix& a) {
  require_square(a, "expm input");
  CMatrix out = a.exp();
  return out;
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const CMatrix& a) { return max_abs(a - a.adjoint()); }

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

CMatrix resolvent_integral_log(const CMatrix& a, double mu0, double eps_min) {
  return resolvent_integral_log(eig(a), mu0, eps_min);
}

CMatrix resolvent_integral_log(const EigenDecomposition& ed, double mu0, double eps_min) {
  require_lower_half_plane(ed.values);
  if (!(eps_min < mu0)) {
    throw Error(ErrorKind::DimensionMismatch, "eps_min must lie below mu0");
  }
  CVector f(ed.values.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    const cplx lam = ed.values(k);
    f(k) = std::log(cplx(mu0) - lam) - std::log(cplx(eps_min) - lam);
  }
  return ed.apply(f);
}

CMatrix resolvent_integral_log_completed(const EigenDecomposition& ed, double mu0, double eps_min) {
  require_lower_half_plane(ed.values);
  if (!(eps_min < 0.0) || !(eps_min < mu0)) {
    throw Error(ErrorKind::DimensionMismatch, "eps_min must be negative and below mu0");
  }
  const cplx shift = std::log(std::abs(eps_min)) + kI * M_PI;
  CVector f(ed.values.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    f(k) = std::log(cplx(mu0) - ed.values(k)) - shift;
  }
  return ed.apply(f);
}

CMatrix resolvent_integral_osc(const CMatrix& a, double mu0, double t) {
  return resolvent_integral_osc(eig(a), mu0, t);
}

CMatrix resolvent_integral_osc(const EigenDecomposition& ed, double mu0, double t) {
  require_lower_half_plane(ed.values);
  CVector f(ed.values.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) f(k) = osc_kernel(ed.values(k), mu0, t);
  return ed.apply(f);
}

}  // namespace qtran
