#pragma once

#include <vector>

#include "taulab/types.hpp"

namespace taulab::fd {

// Central finite-difference weights on the nodes -p..p (Fornberg).
std::vector<double> central_weights(int derivative, int half_width);

// Half-width of the narrowest central stencil with the requested accuracy.
int half_width_for(int derivative, int accuracy);

template <class F>
auto derivative(F&& f, double x, double h, int k, int accuracy = 4) {
  const int p = half_width_for(k, accuracy);
  const auto w = central_weights(k, p);
  using T = decltype(f(x));
  // seeded from the first node so matrix-valued f gets the right shape
  T acc = w[0] * f(x - p * h);
  for (int j = -p + 1; j <= p; ++j) {
    const double c = w[static_cast<std::size_t>(j + p)];
    if (c != 0.0) acc += c * f(x + j * h);
  }
  double scale = 1.0;
  for (int i = 0; i < k; ++i) scale *= h;
  return T(acc / scale);
}

}  // namespace taulab::fd
