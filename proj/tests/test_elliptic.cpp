#include <gtest/gtest.h>

#include <cmath>

#include "taulab/diff.hpp"
#include "taulab/elliptic.hpp"
#include "taulab/errors.hpp"

using namespace taulab;
using namespace taulab::elliptic;

namespace {

// theta_1(z | q) and theta_1'(z | q) from an independent 30-digit evaluation.
struct ThetaRef {
  double z, q, th, thp;
};
constexpr ThetaRef kTheta[] = {
    {0.7, 0.1, 0.71483169540274374, 0.87723322188234745},
    {1.3, 0.3, 1.5180782639164416, 0.69133168287882573},
    {0.4, 0.6, 0.16821274014423786, 0.78628943860794445},
};

}  // namespace

TEST(Theta, FrozenReferenceValues) {
  for (const auto& r : kTheta) {
    EXPECT_NEAR(theta1(r.z, r.q).real(), r.th, 1e-14);
    EXPECT_NEAR(theta1(r.z, r.q, 1).real(), r.thp, 1e-14);
  }
}

// Property: series, exponential series and product agree at complex points.
TEST(Theta, RepresentationsAgree) {
  for (double q : {0.05, 0.3, 0.7})
    for (cplx z : {cplx(0.3, 0.1), cplx(1.9, -0.4), cplx(-0.8, 0.0)}) {
      const cplx t = theta1(z, q);
      EXPECT_LT(std::abs(theta1_series(z, q) - t), 1e-13 * std::max(1.0, std::abs(t)));
      EXPECT_LT(std::abs(theta1_product(z, q) - t), 1e-13 * std::max(1.0, std::abs(t)));
    }
}

TEST(Theta, QuasiPeriodicity) {
  // theta_1(z + pi) = -theta_1(z); theta_1(z + pi tau) = -q^{-1} e^{-2iz} theta_1(z)
  const double q = 0.2;
  const cplx z(0.4, 0.1), shift(0.0, -std::log(q));
  EXPECT_LT(std::abs(theta1(z + kPi, q) + theta1(z, q)), 1e-14);
  const cplx rhs = -theta1(z, q) * std::exp(cplx(0.0, -2.0) * z) / q;
  EXPECT_LT(std::abs(theta1(z + shift, q) - rhs), 1e-12 * std::abs(rhs));
}

TEST(Theta, DerivativesMatchFiniteDifferences) {
  const double q = 0.3;
  for (int k = 1; k <= 3; ++k) {
    const auto f = [&](double x) { return theta1(x, q, k - 1); };
    EXPECT_LT(std::abs(theta1(0.9, q, k) - fd::derivative(f, 0.9, 1e-3, 1, 8)), 1e-9) << k;
  }
  EXPECT_THROW(theta1(0.1, q, 4), InvalidArgument);
  EXPECT_THROW(theta1(0.1, 1.2), InvalidArgument);
}

TEST(PeriodicSystem, StructureAndPeriodicity) {
  for (auto kind : {PeriodicSystem::Kind::Half, PeriodicSystem::Kind::Full, PeriodicSystem::Kind::Regular}) {
    const auto sys = build_system(0.3, 12, kind);
    EXPECT_LT(sys.structure_residual(), 1e-13);
    EXPECT_LT(sys.periodicity_residual(), 1e-12);
  }
  EXPECT_THROW(build_theta_system(0.3, 0), InvalidArgument);
  EXPECT_GT(default_truncation(0.9), default_truncation(0.1));
}

TEST(PeriodicSystem, TauIsThetaProduct) {
  for (double q : {0.1, 0.3, 0.5}) {
    const auto sys = build_theta_system(q, 40);
    for (double x = 0.2; x < 3.0; x += 0.35)
      EXPECT_LT(std::abs(tau_periodic(sys, x) - theta_product_expression(x, q)), 1e-9) << q << " " << x;
  }
}

TEST(PeriodicSystem, HalfSystemProduct) {
  const auto sys = build_half_system(0.3, 6);
  for (double x : {0.4, 1.1, 2.6})
    EXPECT_LT(std::abs(tau_periodic(sys, x) - half_product_expression(x, 0.3, 6)), 1e-12);
}

TEST(PeriodicSystem, TailBoundShrinksWithN) {
  EXPECT_GT(build_theta_system(0.5, 5).tail_trace(), build_theta_system(0.5, 10).tail_trace());
  EXPECT_LT(build_theta_system(0.3, 40).tail_trace(), 1e-30);
}

TEST(PeriodicSystem, LogDerivatives) {
  const auto sys = build_theta_system(0.3, 30);
  const auto lt = [&](double x) { return std::log(tau_periodic(sys, x)); };
  const double x = 1.1;
  EXPECT_LT(std::abs(log_tau_periodic_d1(sys, x) - fd::derivative(lt, x, 1e-3, 1, 8)), 1e-9);
  EXPECT_LT(std::abs(log_tau_periodic_d2(sys, x) - fd::derivative(lt, x, 1e-2, 2, 8)), 1e-8);
}

TEST(ZeroSet, OnTheLattice) {
  for (double q : {0.1, 0.3}) EXPECT_LT(zero_set_error(q, 40), 1e-8);
}

TEST(Weierstrass, LaurentExpansionNearOrigin) {
  const auto p = EllipticParams::from_nome(0.1);
  const cplx z(0.01, 0.005);
  const cplx expect = 1.0 / (z * z) + g2(p) * z * z / 20.0;
  EXPECT_LT(std::abs(weierstrass_p(z, p) - expect), 1e-9);
  EXPECT_LT(std::abs(p.e1 + p.e2 + p.e3), 1e-12);
  EXPECT_NEAR(weierstrass_p(p.omega1, p).real(), p.e1, 1e-12);
}

// Property: the cubic p'^2 = 4p^3 - g2 p - g3, evenness and double periodicity.
TEST(Weierstrass, CubicAndPeriodicity) {
  for (const auto& p : {EllipticParams::from_nome(0.1), EllipticParams::from_nome(0.45),
                        EllipticParams::from_periods(1.3, 0.9)})
    for (cplx x : {cplx(0.7), cplx(1.2, 0.3), cplx(0.4, -0.2)}) {
      EXPECT_LT(cubic_residual(x, p), 1e-8);
      const cplx v = weierstrass_p(x, p);
      EXPECT_LT(std::abs(weierstrass_p(-x, p) - v), 1e-10 * std::abs(v));
      EXPECT_LT(std::abs(weierstrass_p(x + 2.0 * p.omega1, p) - v), 1e-9 * std::abs(v));
      EXPECT_LT(std::abs(weierstrass_p(x + 2.0 * p.omega2(), p) - v), 1e-9 * std::abs(v));
    }
}

TEST(Weierstrass, ZetaDerivativeAndLegendre) {
  const auto p = EllipticParams::from_periods(1.1, 0.8);
  const cplx x(0.6, 0.2);
  const auto z = [&](double s) { return weierstrass_zeta(x + s, p); };
  EXPECT_LT(std::abs(fd::derivative(z, 0.0, 1e-3, 1, 8) + weierstrass_p(x, p)), 1e-8);
  const auto wp = [&](double s) { return weierstrass_p(x + s, p); };
  EXPECT_LT(std::abs(fd::derivative(wp, 0.0, 1e-3, 1, 8) - weierstrass_p_prime(x, p)), 1e-7);
  EXPECT_NEAR(weierstrass_zeta(p.omega1, p).real(), eta1(p), 1e-12);
  EXPECT_THROW(weierstrass_p(0.0, p), LatticePoint);
  EXPECT_THROW(EllipticParams::from_periods(-1.0, 1.0), InvalidArgument);
}

TEST(Degenerations, TrigonometricAndHyperbolic) {
  EXPECT_LT(trig_limit_gap(0.7, 1e-6), 1e-9);
  EXPECT_GT(trig_limit_gap(0.7, 0.2), 1e-3);
  EXPECT_LT(hyperbolic_limit_gap(0.5, 40.0, 1.0), 1e-10);
}

TEST(Potential, RoutesAgree) {
  const double q = 0.2;
  const auto sys = build_theta_system(q, 30);
  const auto pc = potential_constant(q, 30);
  for (double x : {0.6, 1.4}) {
    const cplx tr = periodic_potential_trace(sys, x);
    EXPECT_LT(std::abs(periodic_potential(sys, x) - tr), 1e-8);
    EXPECT_LT(std::abs(periodic_potential_wp(x, q, kPi / 2.0) - tr), 1e-8);
  }
  EXPECT_NEAR(pc.fitted, pc.half_period, 1e-8);
  EXPECT_GT(std::abs(pc.literal_half - pc.fitted), 1e-3);
}

TEST(Scattering, ClosedForms) {
  const double q = 0.3;
  const auto full = build_theta_system(q, 40);
  const auto half = build_half_system(q, 40);
  for (double x : {0.3, 1.2}) {
    EXPECT_LT(std::abs(scattering_periodic(full, x).real() - scattering_full_exact(q, x)), 1e-10);
    EXPECT_LT(std::abs(scattering_periodic(half, x) - scattering_half_exact(q, x)), 1e-10);
  }
}

TEST(GelfandLevitan, PeriodicVersion) {
  const auto reg = build_regular_system(0.3, 20);
  EXPECT_LT(gl_identity_residual(reg, 0.4), 1e-10);
  EXPECT_LT(periodic_gl_residual(reg, 0.4, 0.9), 1e-8);
  // the leading J/2 block violates the hypothesis
  EXPECT_THROW(periodic_gl_residual(build_half_system(0.3, 5), 0.4, 0.9), HypothesisFailed);
}

TEST(Lame, EigenfunctionIdentities) {
  const auto p = EllipticParams::from_nome(0.1);
  const cplx a(0.4, 0.3);
  EXPECT_LT(lame_eigen_residual(a, p, {0.5, 1.0, 2.0}, 0.01).max, 1e-6);
  for (double x : {0.3, 1.3, 2.4}) EXPECT_LT(lame_product_residual(x, a, p), 1e-8);
  EXPECT_LT(addition_rule_residual(cplx(0.5, 0.1), cplx(0.9, -0.2), a, p), 1e-8);
  EXPECT_LT(trig_addition_residual(cplx(0.5, 0.1), cplx(0.9, -0.2), a), 1e-12);
  const auto psi = [&](double s) { return lame_psi(0.8 + s, a, p); };
  EXPECT_LT(std::abs(fd::derivative(psi, 0.0, 1e-3, 1, 8) - lame_psi_prime(0.8, a, p)), 1e-8);
}

TEST(TravellingWave, DerivedSpeedSolvesPde) {
  const auto p = EllipticParams::from_nome(0.1);
  std::vector<std::array<double, 2>> pts;
  for (double x : {1.0, 1.5, 2.0}) pts.push_back({x, 0.05});
  EXPECT_LT(travelling_wave_residual(p, travelling_wave_speed(p), pts, 0.005).max, 1e-5);
  EXPECT_GT(travelling_wave_residual(p, travelling_wave_speed_literal(p), pts, 0.005).max, 1.0);
}

TEST(PoleDynamics, SymmetricConfigurationIsStationaryConstraint) {
  const auto p = EllipticParams::from_nome(0.1);
  const auto x0 = symmetric_poles(3, cplx(0.3, 0.6), p);
  const auto tr = pole_dynamics(x0, p, 0.01, 1e-4, {0.1, 0.9, 1.7});
  EXPECT_LT(tr.constraint_drift, 1e-6);
  EXPECT_LT(tr.kdv.max, 1e-5);
  EXPECT_EQ(tr.t.size(), tr.poles.size());
  EXPECT_EQ(tr.poles.front().size(), 3u);
}

TEST(PoleDynamics, InvalidConfigurations) {
  const auto p = EllipticParams::from_nome(0.1);
  EXPECT_THROW(pole_dynamics({cplx(0.3, 0.6), cplx(0.8, 0.6)}, p, 0.01, 1e-3, {0.1}), ConstraintViolated);
  EXPECT_THROW(pole_dynamics({cplx(0.3, 0.6), cplx(0.3, 0.6)}, p, 0.01, 1e-3, {0.1}), CollisionDetected);
  EXPECT_THROW(symmetric_poles(0, 0.0, p), InvalidArgument);
  EXPECT_THROW(pole_dynamics({}, p, 0.01, 1e-3, {0.1}), InvalidArgument);
}
