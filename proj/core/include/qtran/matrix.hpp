#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qtran {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// A = S diag(values) S^-1.
struct EigenDecomposition {
  CVector values;
  CMatrix vectors;
  CMatrix inverse_vectors;

  CMatrix reconstruct() const;
  /// S diag(f) S^-1 for per-eigenvalue weights f.
  CMatrix apply(const CVector& f) const;
};

/// Throws NonDiagonalizable when cond(S) exceeds 1e12.
EigenDecomposition eig(const CMatrix& a);

CMatrix expm(const CMatrix& a);

double max_abs(const CMatrix& a);
/// max |A - A^dagger|
double hermiticity_defect(const CMatrix& a);
CMatrix hermitian_part(const CMatrix& a);
void require_square(const CMatrix& a, const char* what);

/// \int_{eps_min}^{mu0} (e - A)^-1 de, principal branch.
CMatrix resolvent_integral_log(const CMatrix& a, double mu0, double eps_min);
CMatrix resolvent_integral_log(const EigenDecomposition& ed, double mu0, double eps_min);

/// Cutoff integral plus the analytic tail \int_{-inf}^{eps_min} [(e - A)^-1 - 1/e] de.
/// Differs from the plain cutoff form only by a term vanishing as |eps_min| grows,
/// and depends on eps_min through a multiple of the identity.
CMatrix resolvent_integral_log_completed(const EigenDecomposition& ed, double mu0, double eps_min);

/// \int_{-inf}^{mu0} e^{i e t} (e - A)^-1 de for t > 0 given in units of hbar/eV.
CMatrix resolvent_integral_osc(const CMatrix& a, double mu0, double t);
CMatrix resolvent_integral_osc(const EigenDecomposition& ed, double mu0, double t);

/// Scalar kernel of resolvent_integral_osc.
cplx osc_kernel(cplx z, double mu0, double t);

/// E1(x) for complex x off the negative real axis.
cplx exp1(cplx x);
/// e^x E1(x), Re x > 0.
cplx scaled_exp1(cplx x);

}  // namespace qtran
