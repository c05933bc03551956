#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>

#include "qtran/error.hpp"
#include "qtran/matrix.hpp"

using namespace qtran;

namespace {

CMatrix sample_matrix() {
  CMatrix a(3, 3);
  a << cplx(0.2, -0.1), cplx(0.5, 0.1), cplx(0, 0), cplx(0.5, -0.1), cplx(-0.3, -0.2), cplx(0.1, 0.2), cplx(0, 0),
      cplx(0.1, -0.2), cplx(0.7, -0.05);
  return a;
}

}  // namespace

TEST(Eig, Reconstructs) {
  const CMatrix a = sample_matrix();
  EXPECT_LT(max_abs(eig(a).reconstruct() - a), 1e-12);
}

TEST(Eig, DefectiveMatrixRejected) {
  CMatrix j(2, 2);
  j << 1.0, 1.0, 0.0, 1.0;
  EXPECT_THROW(eig(j), Error);
}

TEST(Expm, DiagonalAndCommutingCases) {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = cplx(0, 1.3);
  d(1, 1) = cplx(-0.5, 0.2);
  const CMatrix e = expm(d);
  EXPECT_LT(std::abs(e(0, 0) - std::exp(cplx(0, 1.3))), 1e-14);
  EXPECT_LT(std::abs(e(1, 1) - std::exp(cplx(-0.5, 0.2))), 1e-14);
  const CMatrix a = sample_matrix();
  EXPECT_LT(max_abs(expm(a) * expm(-a) - CMatrix::Identity(3, 3)), 1e-12);
}

TEST(Hermitian, PartAndDefect) {
  const CMatrix a = sample_matrix();
  EXPECT_GT(hermiticity_defect(a), 0.1);
  EXPECT_EQ(hermiticity_defect(hermitian_part(a)), 0.0);
}

TEST(LogResolvent, MatrixMatchesNodewiseInverse) {
  const CMatrix a = sample_matrix();
  using boost::math::quadrature::gauss;
  CMatrix ref = CMatrix::Zero(3, 3);
  const double lo = -20.0, hi = 0.0;
  const int panels = 400;
  for (int p = 0; p < panels; ++p) {
    const double x0 = lo + (hi - lo) * p / panels, x1 = lo + (hi - lo) * (p + 1) / panels;
    for (std::size_t k = 0; k < gauss<double, 10>::abscissa().size(); ++k) {
      for (int sgn : {-1, 1}) {
        const double x = gauss<double, 10>::abscissa()[k];
        if (x == 0.0 && sgn < 0) continue;
        const double e = 0.5 * (x0 + x1) + sgn * 0.5 * (x1 - x0) * x;
        const CMatrix r = (e * CMatrix::Identity(3, 3) - a).inverse();
        ref += 0.5 * (x1 - x0) * gauss<double, 10>::weights()[k] * r;
      }
    }
  }
  EXPECT_LT(max_abs(resolvent_integral_log(a, hi, lo) - ref), 1e-9);
}

TEST(LogResolvent, CompletedFormApproachesCutoffForm) {
  const CMatrix a = sample_matrix();
  const EigenDecomposition ed = eig(a);
  const CMatrix tail_limit = resolvent_integral_log_completed(ed, 0.0, -1e6);
  const CMatrix plain = resolvent_integral_log(ed, 0.0, -1e6);
  EXPECT_LT(max_abs(tail_limit - plain), 1e-5);
  // The cutoff dependence of the completed form is a multiple of the identity.
  const CMatrix diff = resolvent_integral_log_completed(ed, 0.0, -1e3) - resolvent_integral_log_completed(ed, 0.0, -2e3);
  EXPECT_LT(max_abs(diff - diff(0, 0) * CMatrix::Identity(3, 3)), 1e-12);
}

TEST(OscResolvent, MatrixAgreesWithScalarKernel) {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = cplx(0.5, -0.1);
  d(1, 1) = cplx(-1.0, -0.3);
  const CMatrix r = resolvent_integral_osc(d, 0.0, 2.0);
  EXPECT_LT(std::abs(r(0, 0) - osc_kernel(d(0, 0), 0.0, 2.0)), 1e-14);
  EXPECT_LT(std::abs(r(1, 1) - osc_kernel(d(1, 1), 0.0, 2.0)), 1e-14);
  EXPECT_LT(std::abs(r(0, 1)), 1e-14);
}
