#include <gtest/gtest.h>

#include <boost/math/special_functions/airy.hpp>
#include <cmath>

#include "taulab/airy.hpp"
#include "taulab/errors.hpp"

using namespace taulab;
using namespace taulab::airy;

namespace {

// Reference values computed independently with 30-digit arithmetic.
struct AiryRef {
  double x, ai, aip;
};
constexpr AiryRef kAiry[] = {
    {-7.5, 0.32177571638064788, 0.3188095066985546},
    {-3.2, -0.41744342056415138, 0.065031146995262914},
    {0.0, 0.35502805388781724, -0.2588194037928068},
    {1.7, 0.054324792732919471, -0.077374889525325032},
    {5.0, 0.00010834442813607442, -0.00024741389086846248},
    {9.0, 2.4711684308724898e-9, -7.4806413896589464e-9},
    {12.0, 1.3931846888753608e-13, -4.8547365549853085e-13},
};

// F2 from an independent high-precision Nystrom determinant.
constexpr std::array<double, 2> kF2[] = {
    {-3.0, 0.080319552939334}, {-2.0, 0.41322414250511442}, {-1.0, 0.80721424199927899},
    {0.0, 0.96937282835526111}, {1.0, 0.99750543814938908}, {2.0, 0.99988755369830916},
};

}  // namespace

TEST(Airy, FrozenReferenceValues) {
  for (const auto& r : kAiry) {
    const auto [ai, aip] = airy_pair(r.x);
    EXPECT_LT(std::abs(ai - r.ai), 1e-12 * std::max(1.0, std::abs(r.ai)) + 1e-10 * std::abs(r.ai)) << r.x;
    EXPECT_LT(std::abs(aip - r.aip), 1e-12 * std::max(1.0, std::abs(r.aip)) + 1e-10 * std::abs(r.aip)) << r.x;
  }
}

// Property: agreement with Boost across the whole supported range, relative
// on the decaying side.
TEST(Airy, MatchesBoostAcrossRange) {
  for (double x = -20.0; x <= 20.0; x += 0.173) {
    const double ref = boost::math::airy_ai(x), refp = boost::math::airy_ai_prime(x);
    const double scale = x > 0.0 ? std::abs(ref) : 1.0;
    EXPECT_LT(std::abs(airy::airy(x) - ref), 1e-9 * scale) << x;
    EXPECT_LT(std::abs(airy_prime(x) - refp), 1e-9 * (x > 0.0 ? std::abs(refp) : 1.0)) << x;
  }
}

TEST(Airy, MethodsOverlapAtCrossover) {
  for (double x : {-8.0, -7.0}) {
    const auto s = airy_pair(x, Method::Series), a = airy_pair(x, Method::Asymptotic);
    EXPECT_LT(std::abs(s.first - a.first), 1e-10);
    EXPECT_LT(std::abs(s.second - a.second), 1e-10);
  }
  const auto c = airy_pair(6.0, Method::Continuation);
  EXPECT_LT(std::abs(c.first - boost::math::airy_ai(6.0)), 1e-12 * boost::math::airy_ai(6.0));
  EXPECT_THROW(airy_pair(9.0, Method::Continuation), InvalidArgument);
}

TEST(Airy, WronskianProperty) {
  // Ai Bi' - Ai' Bi = 1/pi checks Ai, Ai' together with Boost's Bi
  for (double x : {-5.0, -1.0, 0.5, 3.0}) {
    const double w = airy::airy(x) * boost::math::airy_bi_prime(x) - airy_prime(x) * boost::math::airy_bi(x);
    EXPECT_NEAR(w, 1.0 / M_PI, 1e-11);
  }
}

TEST(AiryKernel, ContinuousOnDiagonal) {
  const double a = 0.7;
  const double diag = airy_prime(a) * airy_prime(a) - a * airy::airy(a) * airy::airy(a);
  EXPECT_NEAR(airy_kernel(a, a), diag, 1e-14);
  EXPECT_NEAR(airy_kernel(a, a + 1e-7), diag, 1e-7);
  EXPECT_NEAR(airy_kernel(0.2, 1.1), airy_kernel(1.1, 0.2), 1e-16);
}

TEST(AiryKernel, ProductFactorization) {
  for (double x : {-2.0, 0.0, 1.5}) EXPECT_LT(airy_factorization_residual(x, default_product_grid()), 1e-10);
  EXPECT_THROW(airy_factorization_residual(-6.0, default_product_grid()), InvalidArgument);
}

TEST(F2, FrozenReferenceValues) {
  for (const auto& [x, f] : kF2) EXPECT_NEAR(f2_determinant(x), f, 1e-12) << x;
}

TEST(F2, MonotoneAndLimits) {
  double prev = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.5) {
    const double f = f2_determinant(x);
    EXPECT_GE(f, prev);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-14);
    prev = f;
  }
  EXPECT_NEAR(f2_determinant(8.0), 1.0, 1e-9);
  EXPECT_LT(f2_determinant(-6.0), 1e-7);
  EXPECT_THROW(f2_determinant(-9.0), InvalidArgument);
}

TEST(F2, NodeConvergence) {
  F2Params coarse;
  coarse.order = 8;
  coarse.panel = coarse.T_sigma;
  const double gap_coarse = std::abs(f2_determinant(-2.0, coarse) - kF2[1][1]);
  EXPECT_GT(gap_coarse, 1e-9);  // too few nodes for full accuracy
  EXPECT_LT(std::abs(f2_determinant(-2.0) - kF2[1][1]), 1e-12);
}

TEST(F2, HankelSquareIsAiryKernel) {
  // det(I - K_Ai) on (x, inf) equals det(I - H) det(I + H) for the Hankel H.
  const auto g = f2_grid();
  const auto H = airy_hankel(-1.0, g);
  const cplx via = fredholm::fredholm_det(H, -1.0) * fredholm::fredholm_det(H, 1.0);
  EXPECT_NEAR(via.real(), kF2[2][1], 1e-12);
  const auto K = airy_kernel_operator(-1.0);
  EXPECT_NEAR(fredholm::fredholm_det(K, -1.0).real(), kF2[2][1], 1e-12);
}

TEST(GapProbabilities, AiryKernelSumsToOne) {
  const auto K = airy_kernel_operator(-2.0);
  const auto E = fredholm::gap_probabilities(K, 12);
  double s = 0.0;
  for (double e : E) s += e;
  EXPECT_NEAR(s, 1.0, 1e-8);
  EXPECT_NEAR(E[0], kF2[1][1], 1e-8);
}
