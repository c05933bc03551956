#include <gtest/gtest.h>

#include <cmath>

#include "qtran/cso.hpp"
#include "qtran/error.hpp"

using namespace qtran;

namespace {

CMatrix complex_h() {
  CMatrix h(3, 3);
  h << cplx(0.3, 0), cplx(-0.4, 0.1), cplx(0, 0), cplx(-0.4, -0.1), cplx(-0.2, 0), cplx(0.2, 0.3), cplx(0, 0),
      cplx(0.2, -0.3), cplx(0.5, 0);
  return h;
}

CMatrix rank_one_lambda() {
  CVector v(3);
  v << cplx(0.3, 0), cplx(0.1, 0.2), cplx(0, 0.1);
  return v * v.adjoint();
}

CMatrix scalar(double x) { return CMatrix::Constant(1, 1, x); }

}  // namespace

TEST(Cso, ZeroCouplingGivesZeroTransforms) {
  const CausalityTransforms ct = causality_transforms(complex_h(), CMatrix::Zero(3, 3), symmetric_window(0, -1000));
  EXPECT_EQ(max_abs(ct.gamma_plus) + max_abs(ct.gamma_minus) + max_abs(ct.lambda_plus) + max_abs(ct.lambda_minus), 0.0);
  const CMatrix s = CMatrix::Identity(3, 3);
  EXPECT_EQ(max_abs(cso_q(s, ct)), 0.0);
}

TEST(Cso, TransformsAreHermitian) {
  const CausalityTransforms ct = causality_transforms(complex_h(), rank_one_lambda(), symmetric_window(0, -1000));
  EXPECT_LT(hermiticity_defect(ct.gamma_plus), 1e-12);
  EXPECT_LT(hermiticity_defect(ct.gamma_minus), 1e-12);
  EXPECT_LT(hermiticity_defect(ct.lambda_plus), 1e-12);
  EXPECT_LT(hermiticity_defect(ct.lambda_minus), 1e-12);
}

TEST(Cso, DeepLevelSeesOnlyOccupiedWindow) {
  const double lam = 0.1;
  const CausalityTransforms ct = causality_transforms(scalar(-1000 * lam), scalar(lam), symmetric_window(0, -1000));
  EXPECT_NEAR(ct.lambda_plus(0, 0).real(), lam, 1e-12);
  EXPECT_NEAR(ct.lambda_minus(0, 0).real(), 0.0, 1e-12);
}

TEST(Cso, WindowPartsSumToLinewidth) {
  // The band edges leave (1/pi) log|(e - hi)/(e - lo)| in the sum, which vanishes as the band widens.
  const CMatrix lam = rank_one_lambda();
  const LeadWindow w = symmetric_window(0, -1000);
  const CausalityTransforms ct = causality_transforms(complex_h(), lam, w);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(complex_h());
  CVector f(3);
  for (int k = 0; k < 3; ++k) {
    const double e = solver.eigenvalues()(k);
    f(k) = std::log(std::abs((e - w.hi) / (e - w.lo))) / M_PI;
  }
  const CMatrix x = lam * solver.eigenvectors() * f.asDiagonal() * solver.eigenvectors().adjoint();
  const CMatrix edge = (x - x.adjoint()) / (2.0 * kI);
  EXPECT_LT(max_abs(ct.lambda_plus + ct.lambda_minus - lam - edge), 1e-12);
  EXPECT_GT(max_abs(edge), 1e-6);

  const CausalityTransforms wide = causality_transforms(complex_h(), lam, symmetric_window(0, -1e8));
  EXPECT_LT(max_abs(wide.lambda_plus + wide.lambda_minus - lam), 1e-9);
}

TEST(Cso, ShiftPartIsLogarithmicHilbertTransform) {
  // (1/pi) PV \int_lo^mu de'/(e - e') = (1/pi) log|(e - lo)/(e - mu)| for a scalar level.
  const LeadWindow w = symmetric_window(0.0, -50.0);
  const double lam = 0.2, e = 0.7;
  const CausalityTransforms ct = causality_transforms(scalar(e), scalar(lam), w);
  EXPECT_NEAR(ct.gamma_plus(0, 0).real(), lam / M_PI * std::log(std::abs((e - w.lo) / (e - w.mu))), 1e-12);
  EXPECT_NEAR(ct.gamma_minus(0, 0).real(), lam / M_PI * std::log(std::abs((e - w.mu) / (e - w.hi))), 1e-12);
}

TEST(Cso, ExpansionIdentity) {
  const CausalityTransforms ct = causality_transforms(complex_h(), rank_one_lambda(), symmetric_window(0, -1000));
  CMatrix s = 0.8 * CMatrix::Identity(3, 3);
  s(0, 2) = cplx(0.1, -0.3);
  s(2, 0) = std::conj(s(0, 2));
  EXPECT_LT(max_abs(cso_q(s, ct) - cso_q_expanded(s, ct)), 1e-12);
}

TEST(Cso, RightHandSidePreservesHermiticity) {
  const CMatrix h = complex_h();
  const CausalityTransforms ct = causality_transforms(h, rank_one_lambda(), symmetric_window(0, -1000));
  CMatrix s = CMatrix::Identity(3, 3);
  s(0, 1) = cplx(0.2, 0.4);
  s(1, 0) = std::conj(s(0, 1));
  EXPECT_LT(hermiticity_defect(-kI * (h * s - s * h) - cso_q(s, ct)), 1e-12);
}

TEST(Cso, ScalarFixedPointIsFermiGoldenRule) {
  // For one level inside the occupied window the stationary occupation is full.
  const CausalityTransforms ct = causality_transforms(scalar(-0.5), scalar(0.1), symmetric_window(0, -1000));
  EXPECT_NEAR(std::abs(cso_q(scalar(2.0), ct)(0, 0)), 0.0, 1e-14);
  EXPECT_GT(std::abs(cso_q(scalar(1.0), ct)(0, 0)), 0.1);
}

TEST(Cso, LevelAtChemicalPotentialRejected) {
  EXPECT_THROW(causality_transforms(scalar(0.0), scalar(0.1), symmetric_window(0, -1000)), Error);
}
