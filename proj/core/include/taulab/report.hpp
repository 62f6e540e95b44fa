#pragma once

#include <limits>
#include <string>
#include <vector>

namespace taulab {

// Pointwise residuals of an identity or equation over a sample grid.
struct ResidualReport {
  std::vector<double> grid;
  std::vector<double> residuals;
  double max = 0.0;
  double order_estimate = std::numeric_limits<double>::quiet_NaN();

  void push(double where, double value);
  // Associative merge: concatenates samples, keeps the larger max and the
  // smaller (more pessimistic) order estimate.
  void merge(const ResidualReport& other);
};

// Empirical convergence order from residuals at step h and h/ratio.
double convergence_order(double coarse, double fine, double ratio = 2.0);

std::string to_json(const ResidualReport& r);
std::string to_csv(const ResidualReport& r);

}  // namespace taulab
