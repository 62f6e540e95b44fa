#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "taulab/acceptance.hpp"
#include "taulab/diff.hpp"
#include "taulab/errors.hpp"
#include "taulab/linsys.hpp"

using namespace taulab;

namespace {

CMat random_matrix(std::mt19937_64& rng, int r, int c) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMat M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = cplx(u(rng), u(rng));
  return M;
}

}  // namespace

TEST(MatrixExp, DiagonalMatchesScalarExponentials) {
  CVec l(3);
  l << 0.5, cplx(1.0, 2.0), -0.3;
  const CMat E = matrix_exp(l.asDiagonal().toDenseMatrix(), 1.7);
  for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(E(j, j) - std::exp(-1.7 * l(j))), 1e-14);
  EXPECT_LT((E - CMat(E.diagonal().asDiagonal())).norm(), 1e-15);
}

TEST(MatrixExp, JordanBlockClosedForm) {
  CMat J = CMat::Identity(3, 3);
  J(0, 1) = J(1, 2) = 1.0;
  // e^{-xJ} = e^{-x} (I - xN + x^2 N^2 / 2)
  const double x = 0.8;
  const CMat E = matrix_exp(J, x);
  EXPECT_NEAR(E(0, 1).real(), -x * std::exp(-x), 1e-15);
  EXPECT_NEAR(E(0, 2).real(), 0.5 * x * x * std::exp(-x), 1e-15);
}

TEST(Lyapunov, AgreesWithKroneckerReference) {
  std::mt19937_64 rng(11);
  for (int n : {1, 2, 5, 9}) {
    const auto sys = acceptance::random_scattering_system(rng, n);
    const CMat M = random_matrix(rng, n, n);
    const CMat R = solve_lyapunov(sys.A(), M), Rk = solve_lyapunov_kron(sys.A(), M);
    EXPECT_LT((R - Rk).norm() / Rk.norm(), 1e-11) << "n = " << n;
    EXPECT_LT((sys.A() * R + R * sys.A() - M).norm(), 1e-11);
  }
}

TEST(Lyapunov, DefectiveMatrixUsesSchurPath) {
  const auto sys = acceptance::jordan_system();
  EXPECT_LT(lyapunov_residual(sys, 0.0), 1e-12);
  EXPECT_LT(lyapunov_residual(sys, 1.5), 1e-12);
}

TEST(Sylvester, ResidualSmall) {
  std::mt19937_64 rng(5);
  const auto a = acceptance::random_scattering_system(rng, 4), b = acceptance::random_scattering_system(rng, 3);
  const CMat M = random_matrix(rng, 4, 3);
  const CMat X = solve_sylvester(a.A(), b.A(), M);
  EXPECT_LT((a.A() * X + X * b.A() - M).norm(), 1e-12);
}

TEST(LinearSystem, RejectsBadInput) {
  EXPECT_THROW(LinearSystem::make(CMat::Identity(2, 2), CMat::Ones(3, 1), CMat::Ones(1, 2)), InvalidArgument);
  CMat A = CMat::Identity(2, 2);
  A(1, 1) = -1.0;
  // eigenvalues 1 and -1 sum to zero
  EXPECT_THROW(LinearSystem::make(A, CMat::Ones(2, 1), CMat::Ones(1, 2)), SpectrumCollision);
  CMat Aneg = CMat::Identity(1, 1) * -2.0;
  EXPECT_THROW(LinearSystem::make(Aneg, CMat::Ones(1, 1), CMat::Ones(1, 1), true), InvalidArgument);
}

TEST(Tau, OneSolitonClosedForm) {
  const double l = 1.3;
  const auto sys = acceptance::multi_soliton({l});
  for (double x : {-1.0, 0.0, 0.4, 2.0}) {
    EXPECT_LT(std::abs(tau(sys, x) - (1.0 + std::exp(-2.0 * l * x))), 1e-13 * (1.0 + std::exp(-2.0 * l * x)));
    const double sech = 1.0 / std::cosh(l * x);
    const double u = -2.0 * l * l * sech * sech;
    EXPECT_NEAR(potential(sys, x).real(), u, 1e-13);
    EXPECT_NEAR(potential_logdet(sys, x).real(), u, 1e-13);
    EXPECT_NEAR(potential_fd(sys, x).real(), u, 1e-6);
  }
}

TEST(Tau, EmptySystemIsOne) {
  const auto sys = LinearSystem::make(CMat(0, 0), CMat(0, 1), CMat(1, 0));
  EXPECT_EQ(tau(sys, 0.3), cplx(1.0));
  EXPECT_EQ(log_tau_d1(sys, 0.3), cplx(0.0));
}

TEST(Tau, DirectSumMultiplies) {
  std::mt19937_64 rng(3);
  const auto a = acceptance::random_scattering_system(rng, 3), b = acceptance::random_scattering_system(rng, 2);
  const auto s = LinearSystem::direct_sum(a, b);
  for (double x : {0.0, 0.7}) {
    const cplx expect = tau(a, x) * tau(b, x);
    EXPECT_LT(std::abs(tau(s, x) - expect), 1e-12 * std::abs(expect));
  }
}

TEST(Tau, LogDerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sys = acceptance::random_scattering_system(rng, 1 + trial);
    for (cplx mu : {cplx(1.0), cplx(0.3, -0.8)}) {
      const double x = 0.5;
      const auto lt = [&](double s) { return std::log(tau(sys, s, mu)); };
      const cplx fd1 = fd::derivative(lt, x, 1e-3, 1, 8);
      const cplx fd2 = fd::derivative(lt, x, 1e-2, 2, 8);
      EXPECT_LT(std::abs(log_tau_d1(sys, x, mu) - fd1), 1e-9);
      EXPECT_LT(std::abs(log_tau_d2(sys, x, mu) - fd2), 1e-8);
    }
  }
}

TEST(Tau, FarLeftStaysFinite) {
  const auto sys = acceptance::three_soliton();
  for (double x : {-4.0, -8.0}) {
    const cplx u = potential(sys, x);
    EXPECT_TRUE(std::isfinite(u.real()));
    EXPECT_LT(std::abs(u - potential_fd(sys, x)), 1e-5 * std::max(1.0, std::abs(u)));
  }
  // e^{-2 lambda x} grows like e^{48} at x = -8 for lambda = 3; the tail is tiny
  EXPECT_LT(std::abs(potential(sys, -8.0)), 1e-3);
}

TEST(Bracket, PotentialIsMinusFourBracketA) {
  const auto sys = acceptance::multi_soliton({0.7, 1.4});
  for (double x : {-0.5, 0.3, 1.1})
    EXPECT_LT(std::abs(-4.0 * bracket(sys, x, sys.A())(0, 0) - potential_logdet(sys, x)), 1e-12);
}

// Property: d/dx bracket(P) agrees with finite differences for arbitrary constant P.
TEST(Bracket, DerivativeRuleProperty) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    const auto sys = acceptance::random_scattering_system(rng, 2 + trial % 3);
    const CMat P = random_matrix(rng, static_cast<int>(sys.n()), static_cast<int>(sys.n()));
    const double x = 0.2 * trial;
    const auto f = [&](double s) { return CMat(bracket(sys, s, P)); };
    const CMat fd = fd::derivative(f, x, 1e-3, 1, 8);
    EXPECT_LT((bracket_derivative(sys, x, P) - fd).norm(), 1e-8);
  }
}

// Property: bracket(P) bracket(Q) = bracket(P (AF + FA - 2FAF) Q).
TEST(Bracket, ProductRuleProperty) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 6; ++trial) {
    const auto sys = acceptance::random_scattering_system(rng, 3);
    const CMat P = random_matrix(rng, 3, 3), Q = random_matrix(rng, 3, 3);
    const double x = 0.3 + 0.1 * trial;
    const CMat F = resolvent_F(sys, x);
    const CMat& A = sys.A();
    const CMat lhs = bracket(sys, x, P) * bracket(sys, x, Q);
    const CMat rhs = bracket(sys, x, P * (A * F + F * A - 2.0 * F * A * F) * Q);
    EXPECT_LT((lhs - rhs).norm(), 1e-11 * (1.0 + lhs.norm()));
  }
}

TEST(Resolvent, PropagatedStateSatisfiesLyapunov) {
  std::mt19937_64 rng(31);
  const auto sys = acceptance::random_scattering_system(rng, 5);
  for (double x : {0.0, 0.9, 2.5}) EXPECT_LT(lyapunov_residual(sys, x), 1e-12);
  EXPECT_EQ(resolvent_at(sys, 0.0).provenance, StateOperator::Provenance::LyapunovSolved);
}

TEST(Separation, MatchesEigenvalueSums) {
  CVec l(2);
  l << 0.4, 1.5;
  const CMat A = l.asDiagonal().toDenseMatrix();
  EXPECT_NEAR(spectral_separation(A, A), 0.8, 1e-14);
}
