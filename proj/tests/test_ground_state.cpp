#include <gtest/gtest.h>

#include "qtran/error.hpp"
#include "qtran/ground_state.hpp"

using namespace qtran;

TEST(GroundState, SingleSiteClosedForm) {
  for (double lam : {0.05, 0.1, 0.5}) {
    for (double e : {-1.0, -0.1, 0.0, 0.2, 3.0}) {
      const GroundState gs = ground_state_density(build_single_site(e, lam, lam, 0.0));
      const double exact = 1.0 + 2.0 / M_PI * std::atan(-e / (2 * lam));
      EXPECT_NEAR(gs.sigma0(0, 0).real(), exact, 1e-9) << e << " " << lam;
    }
  }
}

TEST(GroundState, UniformBroadeningMatchesSpectralFormula) {
  // With Lambda = gamma I the resolvent is diagonal in the eigenbasis of h0.
  const double gamma = 0.15;
  DeviceModel m = build_chain(5, 0.1, -0.7, 0.0, 0.0, 0.2);
  m.lambda_L = 0.4 * gamma * CMatrix::Identity(5, 5);
  m.lambda_R = 0.6 * gamma * CMatrix::Identity(5, 5);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.h0);
  Eigen::VectorXd occ(5);
  for (int k = 0; k < 5; ++k) occ(k) = 1.0 + 2.0 / M_PI * std::atan((m.mu0 - es.eigenvalues()(k)) / gamma);
  const CMatrix ref = es.eigenvectors() * occ.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  EXPECT_LT(max_abs(ground_state_density(m).sigma0 - ref), 1e-9);
}

TEST(GroundState, HermitianWithPhysicalSpectrum) {
  const DeviceModel m = build_chain(10, 0.0, -1.0, 0.3, 0.3, 0.0);
  const GroundState gs = ground_state_density(m);
  EXPECT_LT(hermiticity_defect(gs.sigma0), 1e-14);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gs.sigma0);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  EXPECT_LE(es.eigenvalues().maxCoeff(), 2.0 + 1e-10);
  // Particle-hole symmetric chain at mu0 = 0 is half filled.
  EXPECT_NEAR(gs.sigma0.trace().real(), 10.0, 1e-8);
}

TEST(GroundState, IndependentOfCutoff) {
  const DeviceModel m = build_chain(3, 0.2, -0.5, 0.1, 0.2, 0.0);
  EXPECT_LT(max_abs(ground_state_density(m, -500.0).sigma0 - ground_state_density(m, -5000.0).sigma0), 1e-9);
}

TEST(GroundState, UncoupledLevelIsSingular) {
  EXPECT_THROW(retarded_gf0(build_single_site(0.0, 0.0, 0.0, 0.0), 0.0), Error);
}
