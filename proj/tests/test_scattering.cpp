#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "taulab/acceptance.hpp"
#include "taulab/errors.hpp"
#include "taulab/fredholm.hpp"
#include "taulab/linsys.hpp"
#include "taulab/scattering.hpp"
#include "taulab/soliton.hpp"

using namespace taulab;
using namespace taulab::inverse;

TEST(GelfandLevitan, ResidualSmallOnReferenceSystems) {
  std::mt19937_64 rng(53);
  for (const auto& sys : {acceptance::three_soliton(), acceptance::jordan_system(),
                          acceptance::random_scattering_system(rng, 4, 2)}) {
    const auto T = gl_kernel(sys, 1.0);
    for (double x : {0.0, 0.8})
      for (double y : {0.0, 0.5, 1.7}) EXPECT_LT(gl_residual(T, x, y), 1e-7);
  }
}

TEST(GelfandLevitan, KernelDiagonalGivesPotential) {
  // u(x) = -2 d/dx T(x, x)
  const auto sys = acceptance::multi_soliton({0.9, 1.6});
  const auto T = gl_kernel(sys, 1.0);
  const double x = 0.4, h = 1e-3;
  const cplx dT = (T(x + h, x + h)(0, 0) - T(x - h, x - h)(0, 0)) / (2.0 * h);
  EXPECT_LT(std::abs(-2.0 * dT - potential(sys, x)), 1e-6);
}

TEST(GelfandLevitan, NonDecayingSymbolRejected) {
  const auto sys = LinearSystem::make(CMat::Identity(1, 1) * cplx(0.0, 1.0), CMat::Ones(1, 1), CMat::Ones(1, 1));
  EXPECT_THROW(gl_tail_grid(sys), TailTooFat);
  EXPECT_THROW(gl_residual(gl_kernel(sys, 1.0), 0.0, 0.0), TailTooFat);
}

TEST(TraceIdentity, HoldsForRandomCouplings) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  for (int k = 0; k < 8; ++k) {
    const auto sys = acceptance::random_scattering_system(rng, 2 + k % 4);
    const cplx mu(u(rng), u(rng));
    EXPECT_LT(trace_identity_residual(sys, mu, 0.6), 1e-9);
  }
}

TEST(Miura, ConstraintAndRoutes) {
  for (const auto& sys : {acceptance::one_soliton(), acceptance::three_soliton()}) {
    const auto mp = miura_pair(sys, 0.5);
    for (double x : {0.5, 1.5, 3.0}) {
      EXPECT_LT(mp.constraint_residual(x), 1e-8);
      EXPECT_LT(mp.route_gap(x), 1e-6);
    }
  }
  EXPECT_THROW(miura_pair(acceptance::one_soliton(), 0.0), InvalidArgument);
}

TEST(BakerAkhiezer, SolvesSchrodinger) {
  const auto sys = acceptance::multi_soliton({0.7, 1.3});
  const auto r = schrodinger_residual(sys, cplx(0.4, 0.9), soliton::uniform_grid(-1.0, 2.0, 0.5), 0.01);
  EXPECT_LT(r.max, 1e-7);
  EXPECT_THROW(baker_akhiezer(sys, 0.0, 0.7), SpectralPole);
}

TEST(BakerAkhiezer, FreeCaseIsExponential) {
  const auto empty = LinearSystem::make(CMat(0, 0), CMat(0, 1), CMat(1, 0));
  EXPECT_LT(std::abs(baker_akhiezer(empty, 0.8, cplx(0.3, 0.2)) - std::exp(cplx(0.3, 0.2) * 0.8)), 1e-15);
}

TEST(Blaschke, EqualsDeterminantRatio) {
  const auto sys = acceptance::multi_soliton({0.8, 1.9});
  const fredholm::ScalarSymbol phi = [&](double s) { return scattering(sys, s)(0, 0); };
  const auto K = fredholm::hankel_operator(phi, 0.3, fredholm::grid_for_system(sys, 0.3));
  const cplx mu(0.3, 0.1);
  const cplx expect = fredholm::fredholm_det(K, mu) / fredholm::fredholm_det(K, -mu);
  EXPECT_LT(std::abs(blaschke_ratio(K, mu) - expect), 1e-12 * std::abs(expect));
}
