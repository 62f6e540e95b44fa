#pragma once

#include <array>
#include <utility>
#include <vector>

#include "taulab/fredholm.hpp"

namespace taulab::airy {

enum class Method { Auto, Series, Asymptotic, Continuation };

// (Ai(x), Ai'(x)). Auto uses the Maclaurin series on [-8, 0], Taylor
// continuation from x = 8 on (0, 8] (keeps relative accuracy on the
// decaying side) and the asymptotic expansions for |x| > 8.
std::pair<double, double> airy_pair(double x, Method method = Method::Auto);
double airy(double x);
double airy_prime(double x);

// Airy kernel (Ai(a)Ai'(b) - Ai'(a)Ai(b)) / (a - b), continuous across a = b.
double airy_kernel(double a, double b);

// 4 [Ai(a)Ai'(b) - Ai'(a)Ai(b)] / (t - z) with a = t/2 + x, b = z/2 + x.
double airy_product_kernel(double x, double t, double z);
// int_{2x}^{2x+L} Ai((t+s)/2) Ai((s+z)/2) ds on the given grid over (0, L).
double airy_product_quadrature(double x, double t, double z, const fredholm::HalfLineGrid& grid);
fredholm::HalfLineGrid default_product_grid();

// max over pairs of |closed form - quadrature|.
double airy_factorization_residual(double x, const fredholm::HalfLineGrid& grid,
                                   const std::vector<std::array<double, 2>>& pairs);
double airy_factorization_residual(double x, const fredholm::HalfLineGrid& grid);

struct F2Params {
  double T_sigma = 14.0;  // truncation of the Hankel variable
  double panel = 0.5;
  int order = 16;
};

fredholm::HalfLineGrid f2_grid(const F2Params& p = {});
// H(s, s') = Ai(s + s' + x) on L^2(0, T_sigma).
fredholm::DiscretizedKernel airy_hankel(double x, const fredholm::HalfLineGrid& grid);
fredholm::DiscretizedKernel airy_hankel_prime(double x, const fredholm::HalfLineGrid& grid);

// F2(x) = det(I - H^2) = det(I - H) det(I + H).
double f2_determinant(double x, const F2Params& p = {});

// Airy kernel restricted to (x, x + T) for gap probabilities.
fredholm::DiscretizedKernel airy_kernel_operator(double x, double T = 14.0, double panel = 0.5);

}  // namespace taulab::airy
