#include "taulab/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <Eigen/Eigenvalues>

#include "taulab/errors.hpp"

namespace taulab::fredholm {

namespace {

template <unsigned N>
void reference_rule(std::vector<double>& x, std::vector<double>& w) {
  using Q = boost::math::quadrature::gauss<double, N>;
  const auto& ab = Q::abscissa();
  const auto& wt = Q::weights();
  x.clear();
  w.clear();
  // boost stores the non-negative half; zero (odd N) comes first.
  for (std::size_t i = 0; i < ab.size(); ++i) {
    if (ab[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(wt[i]);
    } else {
      x.push_back(-ab[i]);
      w.push_back(wt[i]);
      x.push_back(ab[i]);
      w.push_back(wt[i]);
    }
  }
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> xs, ws;
  for (auto i : idx) {
    xs.push_back(x[i]);
    ws.push_back(w[i]);
  }
  x = xs;
  w = ws;
}

void rule(int order, std::vector<double>& x, std::vector<double>& w) {
  switch (order) {
    case 2: reference_rule<2>(x, w); break;
    case 3: reference_rule<3>(x, w); break;
    case 4: reference_rule<4>(x, w); break;
    case 5: reference_rule<5>(x, w); break;
    case 6: reference_rule<6>(x, w); break;
    case 7: reference_rule<7>(x, w); break;
    case 8: reference_rule<8>(x, w); break;
    case 10: reference_rule<10>(x, w); break;
    case 15: reference_rule<15>(x, w); break;
    case 16: reference_rule<16>(x, w); break;
    case 20: reference_rule<20>(x, w); break;
    case 30: reference_rule<30>(x, w); break;
    default: throw InvalidArgument("unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

double max_abs(const CMat& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace

HalfLineGrid make_panel_grid(double a, double b, int panels, int order) {
  if (!(b > a) || panels < 1) throw InvalidArgument("panel grid needs b > a and panels >= 1");
  std::vector<double> rx, rw;
  rule(order, rx, rw);
  HalfLineGrid g;
  g.a = a;
  g.T = b - a;
  const double L = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * L;
    for (std::size_t i = 0; i < rx.size(); ++i) {
      g.nodes.push_back(lo + 0.5 * L * (rx[i] + 1.0));
      g.weights.push_back(0.5 * L * rw[i]);
    }
  }
  return g;
}

HalfLineGrid make_grid(double T, int m_nodes) {
  if (!(T > 0.0) || m_nodes < 4) throw InvalidArgument("make_grid needs T > 0 and m_nodes >= 4");
  if (m_nodes < 16) return make_panel_grid(0.0, T, 1, m_nodes);
  const int panels = (m_nodes + 15) / 16;
  return make_panel_grid(0.0, T, panels, 16);
}

double truncation_for_system(const LinearSystem& sys, double x) {
  const double r = sys.min_re_spectrum();
  if (!(r > 0.0)) throw TailTooFat("symbol does not decay: min Re(lambda) <= 0");
  return x + 12.0 / r;
}

HalfLineGrid grid_for_system(const LinearSystem& sys, double x) {
  const double T = std::max(truncation_for_system(sys, x), 1.0);
  double rate = 0.0;
  Eigen::ComplexEigenSolver<CMat> es(sys.A(), false);
  for (const cplx& l : es.eigenvalues()) rate = std::max(rate, std::abs(l));
  const double L = std::min(2.0, 6.0 / std::max(rate, 1e-12));
  const int panels = std::max(1, static_cast<int>(std::ceil(T / L)));
  return make_panel_grid(0.0, T, panels, 16);
}

DiscretizedKernel discretize(const Kernel2& k, const HalfLineGrid& grid, std::string label) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  DiscretizedKernel K;
  K.symbol = std::move(label);
  K.M.resize(n, n);
  std::vector<double> sw(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) sw[i] = std::sqrt(grid.weights[i]);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      K.M(i, j) = sw[static_cast<std::size_t>(i)] * k(grid.nodes[static_cast<std::size_t>(i)], grid.nodes[static_cast<std::size_t>(j)]) *
                  sw[static_cast<std::size_t>(j)];
  return K;
}

DiscretizedKernel hankel_operator(const ScalarSymbol& phi, double x, const HalfLineGrid& grid,
                                  double tol_tail, std::string label) {
  const double end = grid.a + grid.T;
  const double scale = std::max(1.0, std::abs(phi(2.0 * grid.a + 2.0 * x)));
  const double tail = std::max(std::abs(phi(2.0 * end + 2.0 * x)), std::pow(std::abs(phi(end + grid.a + 2.0 * x)), 2));
  if (tail > tol_tail * scale) {
    std::ostringstream os;
    os << "Hankel tail estimate " << tail << " exceeds " << tol_tail << " at T = " << grid.T;
    throw TailTooFat(os.str());
  }
  // phi(s + t + 2x) depends on i + j only through s + t; cache by pairs.
  const auto n = static_cast<Eigen::Index>(grid.size());
  DiscretizedKernel K;
  K.symbol = std::move(label);
  K.shift = x;
  K.M.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double si = grid.nodes[static_cast<std::size_t>(i)], wi = std::sqrt(grid.weights[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = i; j < n; ++j) {
      const double v_w = wi * std::sqrt(grid.weights[static_cast<std::size_t>(j)]);
      const cplx v = v_w * phi(si + grid.nodes[static_cast<std::size_t>(j)] + 2.0 * x);
      K.M(i, j) = v;
      K.M(j, i) = v;
    }
  }
  return K;
}

DiscretizedKernel hankel_operator(const MatrixSymbol& Phi, int block, double x,
                                  const HalfLineGrid& grid, double tol_tail, std::string label) {
  const double end = grid.a + grid.T;
  const double scale = std::max(1.0, max_abs(Phi(2.0 * grid.a + 2.0 * x)));
  const double tail = std::max(max_abs(Phi(2.0 * end + 2.0 * x)), std::pow(max_abs(Phi(end + grid.a + 2.0 * x)), 2));
  if (tail > tol_tail * scale) {
    std::ostringstream os;
    os << "block Hankel tail estimate " << tail << " exceeds " << tol_tail;
    throw TailTooFat(os.str());
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  DiscretizedKernel K;
  K.symbol = std::move(label);
  K.shift = x;
  K.block = block;
  K.M.resize(n * block, n * block);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = std::sqrt(grid.weights[static_cast<std::size_t>(i)] * grid.weights[static_cast<std::size_t>(j)]);
      K.M.block(i * block, j * block, block, block) =
          w * Phi(grid.nodes[static_cast<std::size_t>(i)] + grid.nodes[static_cast<std::size_t>(j)] + 2.0 * x);
    }
  return K;
}

cplx fredholm_det(const DiscretizedKernel& K, cplx mu) {
  const auto n = K.M.rows();
  if (n == 0 || mu == cplx(0.0)) return 1.0;
  return (CMat::Identity(n, n) + mu * K.M).partialPivLu().determinant();
}

CVec kernel_eigenvalues(const DiscretizedKernel& K) {
  if (K.M.rows() == 0) return CVec();
  const bool real_sym = K.M.imag().cwiseAbs().maxCoeff() == 0.0 &&
                        (K.M.real() - K.M.real().transpose()).cwiseAbs().maxCoeff() == 0.0;
  if (real_sym) {
    Eigen::SelfAdjointEigenSolver<RMat> es(K.M.real(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cast<cplx>();
  }
  Eigen::ComplexEigenSolver<CMat> es(K.M, false);
  return es.eigenvalues();
}

cplx fredholm_det_spectral(const DiscretizedKernel& K, cplx mu) {
  cplx d = 1.0;
  for (const cplx& z : kernel_eigenvalues(K)) d *= 1.0 + mu * z;
  return d;
}

CMat cross_gram(const LinearSystem& sysA, const LinearSystem& sysB, double x) {
  const CMat rhs = matrix_exp(sysA.A(), x) * sysA.B() * sysB.C() * matrix_exp(sysB.A(), x);
  return solve_sylvester(sysA.A(), sysB.A(), rhs);
}

std::pair<cplx, cplx> hankel_product_det(const LinearSystem& sys1, const LinearSystem& sys2,
                                         double x, cplx mu) {
  if (sys1.m() != 1 || sys2.m() != 1) throw InvalidArgument("hankel_product_det expects scalar symbols");
  if (mu == cplx(0.0)) return {1.0, 1.0};
  const CMat R12 = cross_gram(sys1, sys2, x);
  const CMat R21 = cross_gram(sys2, sys1, x);
  const auto n1 = sys1.n();
  const cplx lhs = (CMat::Identity(n1, n1) - mu * mu * R12 * R21).partialPivLu().determinant();

  const double T = std::max(truncation_for_system(sys1, x), truncation_for_system(sys2, x));
  double rate = 0.0;
  for (const auto* s : {&sys1, &sys2}) {
    Eigen::ComplexEigenSolver<CMat> es(s->A(), false);
    for (const cplx& l : es.eigenvalues()) rate = std::max(rate, std::abs(l));
  }
  const double L = std::min(2.0, 6.0 / std::max(rate, 1e-12));
  const auto grid = make_panel_grid(0.0, T, std::max(1, static_cast<int>(std::ceil(T / L))), 16);
  auto Phi = [&](double s) {
    CMat P = CMat::Zero(2, 2);
    P(0, 1) = scattering(sys2, s)(0, 0);
    P(1, 0) = scattering(sys1, s)(0, 0);
    return P;
  };
  const auto K = hankel_operator(MatrixSymbol(Phi), 2, x, grid, kDefaultTailTol, "block");
  return {lhs, fredholm_det(K, mu)};
}

std::vector<double> gap_probabilities_from(const std::vector<double>& eig, int n_max) {
  constexpr double eps = 1e-8;
  if (n_max < 0) throw InvalidArgument("n_max must be nonnegative");
  for (double z : eig)
    if (z < -eps || z > 1.0 + eps) {
      std::ostringstream os;
      os << "kernel eigenvalue " << z << " outside [0, 1]";
      throw NotAContraction(os.str());
    }
  // Coefficients of prod((1 - z_i) + s z_i) in s, truncated at n_max.
  std::vector<double> c(static_cast<std::size_t>(n_max + 1), 0.0);
  c[0] = 1.0;
  for (double z0 : eig) {
    const double z = std::clamp(z0, 0.0, 1.0);
    for (int k = n_max; k >= 0; --k) {
      const double prev = k > 0 ? c[static_cast<std::size_t>(k - 1)] : 0.0;
      c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)] * (1.0 - z) + prev * z;
    }
  }
  return c;
}

std::vector<double> gap_probabilities(const DiscretizedKernel& K, int n_max) {
  if (n_max < 0) throw InvalidArgument("n_max must be nonnegative");
  const CVec ev = kernel_eigenvalues(K);
  std::vector<double> eig;
  for (const cplx& z : ev) {
    if (std::abs(z.imag()) > 1e-10) throw NotAContraction("kernel has non-real eigenvalues");
    eig.push_back(z.real());
  }
  return gap_probabilities_from(eig, n_max);
}

std::string kernel_csv(const DiscretizedKernel& K, const HalfLineGrid& grid) {
  std::ostringstream os;
  os.precision(17);
  os << "s,t,k\n";
  const auto n = static_cast<Eigen::Index>(grid.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = std::sqrt(grid.weights[static_cast<std::size_t>(i)] * grid.weights[static_cast<std::size_t>(j)]);
      os << grid.nodes[static_cast<std::size_t>(i)] << ',' << grid.nodes[static_cast<std::size_t>(j)] << ','
         << (K.M(i * K.block, j * K.block) / w).real() << '\n';
    }
  return os.str();
}

}  // namespace taulab::fredholm
