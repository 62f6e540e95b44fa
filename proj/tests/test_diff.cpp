#include <gtest/gtest.h>

#include <cmath>

#include "taulab/diff.hpp"
#include "taulab/report.hpp"

using namespace taulab;

TEST(Stencil, KnownWeights) {
  const auto w1 = fd::central_weights(1, 1);
  ASSERT_EQ(w1.size(), 3u);
  EXPECT_DOUBLE_EQ(w1[0], -0.5);
  EXPECT_DOUBLE_EQ(w1[1], 0.0);
  EXPECT_DOUBLE_EQ(w1[2], 0.5);
  const auto w2 = fd::central_weights(2, 2);
  const double expect[] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(w2[static_cast<std::size_t>(i)], expect[i], 1e-14);
}

// Property: weights annihilate monomials below the derivative order and
// reproduce k! on x^k.
TEST(Stencil, MomentConditions) {
  for (int k = 1; k <= 5; ++k) {
    for (int acc : {2, 4, 6, 8}) {
      const int p = fd::half_width_for(k, acc);
      const auto w = fd::central_weights(k, p);
      for (int m = 0; m <= k; ++m) {
        double s = 0.0;
        for (int j = -p; j <= p; ++j) s += w[static_cast<std::size_t>(j + p)] * std::pow(j, m);
        EXPECT_NEAR(s, m == k ? std::tgamma(k + 1) : 0.0, 1e-9) << "k=" << k << " acc=" << acc << " m=" << m;
      }
    }
  }
}

TEST(Derivative, ConvergesAtStatedOrder) {
  const auto f = [](double x) { return std::sin(x); };
  const double e1 = std::abs(fd::derivative(f, 0.4, 0.1, 3, 4) + std::cos(0.4));
  const double e2 = std::abs(fd::derivative(f, 0.4, 0.05, 3, 4) + std::cos(0.4));
  EXPECT_NEAR(convergence_order(e1, e2), 4.0, 0.2);
}

TEST(Derivative, MatrixValued) {
  const auto f = [](double x) {
    CMat M(2, 3);
    M.setConstant(cplx(x * x, 0.0));
    return M;
  };
  const CMat d = fd::derivative(f, 1.5, 0.01, 1, 4);
  ASSERT_EQ(d.rows(), 2);
  ASSERT_EQ(d.cols(), 3);
  EXPECT_LT(std::abs(d(1, 2) - 3.0), 1e-10);
}

TEST(Report, MergeKeepsWorstAndOrder) {
  ResidualReport a, b;
  a.push(0.0, 1e-3);
  a.order_estimate = 4.0;
  b.push(1.0, 5e-3);
  b.order_estimate = 3.5;
  a.merge(b);
  EXPECT_EQ(a.grid.size(), 2u);
  EXPECT_DOUBLE_EQ(a.max, 5e-3);
  EXPECT_DOUBLE_EQ(a.order_estimate, 3.5);
  EXPECT_NE(to_json(a).find("\"max\""), std::string::npos);
}
