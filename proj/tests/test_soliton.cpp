#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "taulab/acceptance.hpp"
#include "taulab/errors.hpp"
#include "taulab/linsys.hpp"
#include "taulab/soliton.hpp"

using namespace taulab;
using namespace taulab::soliton;

TEST(Evolution, OneSolitonTranslatesAtSpeedLambdaSquared) {
  const double l = 1.5;
  const EvolvedSystem ev(acceptance::multi_soliton({l}), 0.0);
  for (double t : {0.05, 0.2})
    for (double x : {-0.7, 0.3})
      EXPECT_NEAR(kdv_value(ev, x, t).real(), kdv_value(ev, x + l * l * t, 0.0).real(), 1e-12);
}

TEST(Evolution, AdvancedComposes) {
  const EvolvedSystem ev(acceptance::three_soliton(), 0.0);
  const auto a = ev.advanced(0.03).advanced(0.02);
  const auto b = ev.advanced(0.05);
  EXPECT_NEAR(a.t3(), 0.05, 1e-15);
  EXPECT_LT(std::abs(tau(a.system(), 0.2) - tau(b.system(), 0.2)), 1e-12 * std::abs(tau(b.system(), 0.2)));
}

TEST(KdV, MultiSolitonResidual) {
  std::vector<std::array<double, 2>> pts;
  for (double x : {-1.0, 0.0, 1.0})
    for (double t : {0.0, 0.05}) pts.push_back({x, t});
  for (const auto& l : std::vector<std::vector<double>>{{1.0}, {1.0, 1.5}, {1.0, 2.0, 3.0}}) {
    const EvolvedSystem ev(acceptance::multi_soliton(l), 0.0);
    const double lmax = l.back();
    EXPECT_LT(kdv_residual(ev, pts, 0.01, KdvForm::Normalized, 8, 1.0 / (lmax * lmax)).max, 1e-5);
  }
}

// The equation applied to u itself, without the -1/2 rescaling, must fail;
// the rescaled textbook form must hold.
TEST(KdV, ConstantConventions) {
  const EvolvedSystem ev(acceptance::multi_soliton({1.5}), 0.0);
  const std::vector<std::array<double, 2>> pts = {{0.1, 0.0}};
  EXPECT_GT(kdv_residual(ev, pts, 0.01, KdvForm::Literal, 8).max, 1.0);
  EXPECT_LT(kdv_residual(ev, pts, 0.01, KdvForm::Textbook, 8).max, 1e-6);
}

TEST(KdV, GridResidualAndOrder) {
  const EvolvedSystem ev(acceptance::multi_soliton({1.0}), 0.0);
  const auto u = kdv_field(ev, uniform_grid(-1.0, 1.0, 0.01), uniform_grid(0.0, 0.05, 0.005));
  EXPECT_EQ(u.values.rows(), 201);
  EXPECT_LT(kdv_residual(u).max, 1e-3);
  const std::vector<std::array<double, 2>> pts = {{0.2, 0.0}, {-0.4, 0.02}};
  EXPECT_NEAR(kdv_residual(ev, pts, 0.04, KdvForm::Normalized, 2).order_estimate, 2.0, 0.15);
}

TEST(KdV5, ModerateSpectra) {
  const EvolvedSystem ev(acceptance::multi_soliton({0.5, 0.8, 1.1}), 0.0);
  const std::vector<std::array<double, 2>> pts = {{-1.0, 0.0}, {0.0, 0.05}, {1.0, 0.0}};
  EXPECT_LT(kdv5_residual(ev, pts, 0.02, 6).max, 1e-4);
}

TEST(Cauchy, ClosedFormAgreesWithDirect) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int n : {1, 3, 6, 10}) {
    // jittered but well-separated nodes keep the direct determinant resolvable
    CVec x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x(i) = cplx(-0.9 + 1.8 * i / std::max(1, n - 1) + u(rng), u(rng));
      y(i) = cplx(0.6 * std::cos(0.3 + 2.0 * i) + u(rng), 0.5 + u(rng));
    }
    const cplx c = cauchy_det(x, y), d = cauchy_det_direct(x, y);
    EXPECT_LT(std::abs(c - d), 1e-10 * std::abs(d)) << n;
  }
}

TEST(Cauchy, RepeatedNodeGivesZero) {
  CVec x(2), y(2);
  x << 0.2, 0.2;
  y << 0.1, 0.5;
  EXPECT_EQ(cauchy_det(x, y), cplx(0.0));
}

// Property: the subset expansion reproduces det(I + mu R_x) for random
// positive spectra and couplings.
TEST(Expansion, MatchesDeterminantProperty) {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 10; ++k) {
    const auto sys = acceptance::random_diagonal_system(rng, 1 + k % 6);
    const cplx mu(u(rng), u(rng));
    EXPECT_LT(soliton_expansion_gap(sys, u(rng), mu), 1e-10);
  }
}

TEST(Expansion, RejectsNonDiagonal) {
  EXPECT_THROW(soliton_expansion(acceptance::jordan_system(), 0.0), InvalidArgument);
}

TEST(Toda, DiagonalAndRandomSystems) {
  CVec V(3);
  V << 0.5, 1.0, 1.7;
  EXPECT_LT(toda_residual(V.asDiagonal().toDenseMatrix(), CMat::Ones(3, 1), CMat::Ones(1, 3), 3, 0.2).max, 1e-10);
  std::mt19937_64 rng(71);
  const auto sys = acceptance::random_scattering_system(rng, 6);
  EXPECT_LT(toda_residual(sys.A(), sys.B(), sys.C(), 4, 0.5).max, 1e-8);
  EXPECT_EQ(toda_tau(sys.A(), sys.B(), sys.C(), 0, 0.5), cplx(1.0));
}

TEST(KP, HirotaAndLinearEquations) {
  const auto sys = acceptance::multi_soliton({0.6, 0.9, 1.3, 1.7});
  std::vector<std::array<double, 3>> pts = {{-0.5, 0.0, 0.1}, {0.7, 0.3, 0.1}};
  for (int n : {1, 2, 3}) {
    const Tau3 t = [&](double x, double y, double s) { return kp_tau(sys, n, x, y, s).tau; };
    EXPECT_LT(hirota_residual(t, pts, 0.04, 8).max, 1e-4) << n;
  }
  std::mt19937_64 rng(73);
  const auto a = acceptance::random_diagonal_system(rng, 3), b = acceptance::random_diagonal_system(rng, 3);
  const KPParams p{1.0, 1.0, 0.3};
  const std::vector<std::array<double, 4>> p4 = {{0.0, 0.2, 0.1, 0.05}, {0.5, 0.8, 0.1, 0.05}};
  const auto r = kp_scattering_residual(a, b, p, p4);
  EXPECT_LT(r.linear_t.max, 1e-6);
  EXPECT_LT(r.linear_y.max, 1e-6);
  EXPECT_LT(kp_scattering_residual(a, a, p, p4).reduction.max, 1e-10);
}

TEST(KP, FirstTauIsScatteringFunction) {
  // n = 1: the Wronskian is the 1 x 1 matrix C e^{yA^2 - tA^3} e^{-xA} B
  const auto sys = acceptance::multi_soliton({0.8, 1.4});
  EXPECT_LT(std::abs(kp_tau(sys, 1, 0.3, 0.0, 0.0).tau - scattering(sys, 0.3)(0, 0)), 1e-14);
}

TEST(Errors, DomainViolations) {
  CVec x(1), y(1);
  x << 2.0;
  y << 0.5;
  EXPECT_THROW(cauchy_det(x, y), PoleHit);
  EXPECT_THROW(kp_tau(acceptance::multi_soliton({1.0}), 2, 0.0, 0.0, 0.0), RankDeficient);
  EXPECT_THROW(uniform_grid(1.0, 0.0, 0.1), InvalidArgument);
  EXPECT_THROW(acceptance::multi_soliton({}), InvalidArgument);
  EXPECT_THROW(acceptance::multi_soliton({1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(acceptance::multi_soliton({-1.0}), InvalidArgument);
}
