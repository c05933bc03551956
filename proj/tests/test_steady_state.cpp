#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "common.hpp"
#include "qtran/steady_state.hpp"
#include "qtran/units.hpp"

using namespace qtran;

TEST(Transmission, ResonantSymmetricLevel) {
  const DeviceModel m = test::resonant_level();
  const Transmission t = transmission_wbl(m, 0.0, 0.0);
  EXPECT_NEAR(t.standard, 1.0, 1e-14);
  EXPECT_NEAR(t.scaled, 1.0 / (2 * M_PI), 1e-14);
}

TEST(Transmission, LorentzianTail) {
  const DeviceModel m = test::resonant_level();
  const double lam = 0.2;
  // 4 l_L l_R / (x^2 + lam^2) at x = 100 lam.
  EXPECT_NEAR(transmission_wbl(m, 100 * lam, 0.0).standard, 4 * 0.01 / (1e4 * lam * lam + lam * lam), 1e-14);
}

TEST(Transmission, BoundedByChannelCount) {
  const DeviceModel m = build_chain(4, 0.0, -0.8, 0.3, 0.3, 0.0);
  for (double e = -2.0; e <= 2.0; e += 0.05) {
    const double t = transmission_wbl(m, e, 0.0).standard;
    EXPECT_GE(t, -1e-14);
    EXPECT_LE(t, 4.0 + 1e-12);
  }
}

TEST(SteadyCurrent, ZeroBiasAndDecoupledLead) {
  EXPECT_EQ(steady_current(test::resonant_level(), BiasProfile{}, InducedFockRule::half_sum()).j_R, 0.0);
  const DeviceModel m = build_single_site(0.0, 0.1, 0.0, 0.0);
  EXPECT_NEAR(steady_current(m, test::right_bias(-2.0), InducedFockRule::half_sum()).j_R, 0.0, 1e-15);
}

TEST(SteadyCurrent, ClosedFormArctan) {
  // eps_d(inf) = 1 under the half-sum rule; mu_L = 0, mu_R = 2; per-spin integral of T_scaled.
  const SteadyCurrent sc = steady_current(test::resonant_level(), test::right_bias(-2.0), InducedFockRule::half_sum());
  const double lam = 0.2;
  const double per_spin = 2.0 / M_PI * 0.01 / lam * (std::atan(1.0 / lam) - std::atan(-1.0 / lam));
  EXPECT_NEAR(per_spin, 0.0874, 5e-5);
  EXPECT_NEAR(sc.j_R, 2.0 * per_spin, 1e-10);
  EXPECT_NEAR(sc.j_L, -sc.j_R, 1e-14);
  EXPECT_NEAR(sc.j_R_uA, sc.j_R * units::kCurrentUnitMicroAmp, 1e-9);
  EXPECT_NEAR(sc.mu_R, 2.0, 1e-15);
}

TEST(SteadyCurrent, MatchesDirectQuadratureForChain) {
  const DeviceModel m = build_chain(3, 0.1, -0.5, 0.1, 0.2, 0.0);
  const BiasProfile b = test::right_bias(-1.3);
  const SteadyCurrent sc = steady_current(m, b, InducedFockRule::none());
  const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double e) { return transmission_wbl(m, e, 0.0).scaled; }, 0.0, 1.3, 20, 1e-13);
  EXPECT_NEAR(sc.j_R, 2.0 * ref, 1e-9);
}

TEST(SteadyCurrent, AntisymmetricUnderBiasReversal) {
  const DeviceModel m = test::resonant_level(0.1, 0.0);
  for (double v : {0.3, 1.0, 2.5}) {
    BiasProfile plus, minus;
    plus.left = LeadBias::smooth_step(v / 2, 0.1);
    plus.right = LeadBias::smooth_step(-v / 2, 0.1);
    minus.left = LeadBias::smooth_step(-v / 2, 0.1);
    minus.right = LeadBias::smooth_step(v / 2, 0.1);
    const double a = steady_current(m, plus, InducedFockRule::half_sum()).j_R;
    const double b = steady_current(m, minus, InducedFockRule::half_sum()).j_R;
    EXPECT_NEAR(a, -b, 1e-8);
  }
}

TEST(Lorentzian, OnResonanceScalar) {
  LeadLevelSet set;
  set.delta = 1e-3;
  set.levels.push_back({0.5, CMatrix::Constant(1, 1, 0.2)});
  const auto [r, a] = sigma_lorentzian_sum(set, 0.5);
  EXPECT_NEAR(std::abs(r(0, 0) - cplx(0.0, -0.2 / 1e-3)), 0.0, 1e-9);
  EXPECT_LT(max_abs(a - r.adjoint()), 1e-15);
}

TEST(Lorentzian, DenseBandRecoversWideBand) {
  // Uniform levels of density eta = n/W with Gamma = v^2: -Im Sigma^r -> pi eta v^2.
  const int n = 4000;
  const double W = 20.0, v2 = 0.01;
  LeadLevelSet set;
  set.delta = 0.05;
  for (int k = 0; k < n; ++k) set.levels.push_back({-W / 2 + W * (k + 0.5) / n, CMatrix::Constant(1, 1, v2)});
  const auto [r, a] = sigma_lorentzian_sum(set, 0.0);
  EXPECT_NEAR(-r(0, 0).imag(), M_PI * n / W * v2, 0.01 * M_PI * n / W * v2);
  EXPECT_NEAR(r(0, 0).real(), 0.0, 1e-9);
}

TEST(Lorentzian, FarOffResonanceIsReal) {
  LeadLevelSet set;
  set.levels.push_back({0.0, CMatrix::Constant(1, 1, 0.1)});
  const auto [r, a] = sigma_lorentzian_sum(set, 10.0);
  EXPECT_NEAR(r(0, 0).real(), 0.01, 1e-8);
  EXPECT_LT(std::abs(r(0, 0).imag()), 1e-5);
}

TEST(Lorentzian, GeneralTransmissionReducesToWideBand) {
  const DeviceModel m = build_chain(2, 0.1, -0.4, 0.1, 0.2, 0.0);
  const CMatrix sl = -kI * m.lambda_L, sr = -kI * m.lambda_R;
  for (double e : {-0.5, 0.1, 0.7}) {
    EXPECT_NEAR(transmission_general(m.h0, sl, sr, e), transmission_wbl(m, e, 0.0).standard, 1e-12);
  }
}
