#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "taulab/linsys.hpp"
#include "taulab/types.hpp"

namespace taulab::fredholm {

// Composite Gauss-Legendre nodes on [a, a + T].
struct HalfLineGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  double a = 0.0;
  double T = 0.0;
  std::size_t size() const { return nodes.size(); }
};

// m_nodes points on [0, T]: 16-point panels, or one panel of order m_nodes
// when m_nodes < 16.
HalfLineGrid make_grid(double T, int m_nodes);
HalfLineGrid make_panel_grid(double a, double b, int panels, int order = 16);
// Panel grid for the symbol of `sys` at shift x: T = x + 12 / min Re(lambda).
HalfLineGrid grid_for_system(const LinearSystem& sys, double x);
double truncation_for_system(const LinearSystem& sys, double x);

using ScalarSymbol = std::function<cplx(double)>;
using MatrixSymbol = std::function<CMat(double)>;
using Kernel2 = std::function<cplx(double, double)>;

// Symmetrized Nystrom matrix sqrt(w_i) k(t_i, t_j) sqrt(w_j); block kernels
// are laid out node-major with `block` x `block` tiles.
struct DiscretizedKernel {
  CMat M;
  std::string symbol;
  double shift = 0.0;
  int block = 1;
};

inline constexpr double kDefaultTailTol = 1e-9;

// Kernel phi(s + t + 2x) on L^2(0, T).
DiscretizedKernel hankel_operator(const ScalarSymbol& phi, double x, const HalfLineGrid& grid,
                                  double tol_tail = kDefaultTailTol, std::string label = "phi");
// Matrix-symbol version; Phi(s) is block x block.
DiscretizedKernel hankel_operator(const MatrixSymbol& Phi, int block, double x,
                                  const HalfLineGrid& grid, double tol_tail = kDefaultTailTol,
                                  std::string label = "Phi");
// Arbitrary scalar kernel k(s, t) on the grid.
DiscretizedKernel discretize(const Kernel2& k, const HalfLineGrid& grid, std::string label);

// det(I + mu M) by partial-pivot LU.
cplx fredholm_det(const DiscretizedKernel& K, cplx mu);
CVec kernel_eigenvalues(const DiscretizedKernel& K);
// det(I + mu M) as prod(1 + mu z_i) over the eigenvalues z_i.
cplx fredholm_det_spectral(const DiscretizedKernel& K, cplx mu);

// Solves A_j R + R A_k = e^{-x A_j} B_j C_k e^{-x A_k}.
CMat cross_gram(const LinearSystem& sysA, const LinearSystem& sysB, double x);

// (det(I - mu^2 R12 R21), det(I + mu Gamma_Phi)) for the 2x2 block symbol
// Phi = [[0, phi2], [phi1, 0]].
std::pair<cplx, cplx> hankel_product_det(const LinearSystem& sys1, const LinearSystem& sys2,
                                         double x, cplx mu);

// E(n; J) for n = 0..n_max from the spectrum of a kernel with 0 <= K <= I.
std::vector<double> gap_probabilities(const DiscretizedKernel& K, int n_max);
// Same, from eigenvalues already in hand.
std::vector<double> gap_probabilities_from(const std::vector<double>& eig, int n_max);

std::string kernel_csv(const DiscretizedKernel& K, const HalfLineGrid& grid);

}  // namespace taulab::fredholm
