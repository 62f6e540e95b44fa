#include "taulab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "taulab/diff.hpp"
#include "taulab/errors.hpp"

namespace taulab::soliton {

namespace {

CMat flow_factor(const CMat& A, double t3, double t5) {
  if (t3 == 0.0 && t5 == 0.0) return CMat::Identity(A.rows(), A.cols());
  const CMat A3 = A * A * A;
  CMat X = 2.0 * t3 * A3;
  if (t5 != 0.0) X += 2.0 * t5 * A3 * A * A;
  return expm(-X);
}

LinearSystem flowed(const LinearSystem& base, double t3, double t5) {
  const CMat Ft = flow_factor(base.A(), t3, t5);
  return LinearSystem::with_state(base.A(), Ft * base.B(), base.C(), Ft * base.R0(),
                                  base.scattering_class());
}

// Residual of the chosen KdV form given derivatives of u.
cplx kdv_form(KdvForm form, cplx u, cplx ut, cplx ux, cplx uxxx) {
  switch (form) {
    case KdvForm::Normalized: {
      const cplx U = -0.5 * u, Ut = -0.5 * ut, Ux = -0.5 * ux, Uxxx = -0.5 * uxxx;
      return 4.0 * Ut - Uxxx - 12.0 * U * Ux;
    }
    case KdvForm::Literal:
      return 4.0 * ut - uxxx - 12.0 * u * ux;
    case KdvForm::Textbook:
      return 4.0 * ut - uxxx + 6.0 * u * ux;
  }
  return 0.0;
}

}  // namespace

EvolvedSystem::EvolvedSystem(LinearSystem base, double t3, double t5)
    : base_(std::move(base)), t3_(t3), t5_(t5), current_(flowed(base_, t3, t5)) {}

EvolvedSystem EvolvedSystem::advanced(double dt3, double dt5) const {
  return EvolvedSystem(base_, t3_ + dt3, t5_ + dt5);
}

EvolvedSystem evolve(const LinearSystem& sys, double t3, double t5) {
  return EvolvedSystem(sys, t3, t5);
}

std::vector<double> uniform_grid(double a, double b, double step) {
  if (!(step > 0.0) || b < a) throw InvalidArgument("uniform_grid needs step > 0 and b >= a");
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> g(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = a + static_cast<double>(i) * step;
  return g;
}

cplx kdv_value(const EvolvedSystem& sys, double x, double t, Flow flow) {
  const auto e = flow == Flow::T3 ? sys.advanced(t, 0.0) : sys.advanced(0.0, t);
  if (e.system().m() != 1) throw InvalidArgument("kdv_field needs a scalar system");
  return potential(e.system(), x);
}

GridFunction2D kdv_field(const EvolvedSystem& sys, const std::vector<double>& x_grid,
                         const std::vector<double>& t_grid, Flow flow) {
  GridFunction2D g;
  g.x_grid = x_grid;
  g.t_grid = t_grid;
  g.values.resize(static_cast<Eigen::Index>(x_grid.size()), static_cast<Eigen::Index>(t_grid.size()));
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const auto e = flow == Flow::T3 ? sys.advanced(t_grid[j], 0.0) : sys.advanced(0.0, t_grid[j]);
    if (e.system().m() != 1) throw InvalidArgument("kdv_field needs a scalar system");
    for (std::size_t i = 0; i < x_grid.size(); ++i)
      g.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = potential(e.system(), x_grid[i]).real();
  }
  return g;
}

ResidualReport kdv_residual(const GridFunction2D& u, KdvForm form) {
  ResidualReport rep;
  const auto nx = static_cast<int>(u.x_grid.size()), nt = static_cast<int>(u.t_grid.size());
  if (nx < 7 || nt < 5) throw InvalidArgument("kdv_residual needs at least 7 x and 5 t samples");
  const double hx = u.x_grid[1] - u.x_grid[0], ht = u.t_grid[1] - u.t_grid[0];
  const auto w1 = fd::central_weights(1, 2), w3 = fd::central_weights(3, 3);
  for (int j = 2; j < nt - 2; ++j)
    for (int i = 3; i < nx - 3; ++i) {
      double ut = 0, ux = 0, uxxx = 0;
      for (int k = -2; k <= 2; ++k) {
        ut += w1[static_cast<std::size_t>(k + 2)] * u.values(i, j + k);
        ux += w1[static_cast<std::size_t>(k + 2)] * u.values(i + k, j);
      }
      for (int k = -3; k <= 3; ++k) uxxx += w3[static_cast<std::size_t>(k + 3)] * u.values(i + k, j);
      ut /= ht;
      ux /= hx;
      uxxx /= hx * hx * hx;
      rep.push(u.x_grid[static_cast<std::size_t>(i)], std::abs(kdv_form(form, u.values(i, j), ut, ux, uxxx)));
    }
  return rep;
}

ResidualReport kdv_residual(const EvolvedSystem& sys, const std::vector<std::array<double, 2>>& points,
                            double h, KdvForm form, int accuracy, double t_ratio) {
  if (!(t_ratio > 0.0)) throw InvalidArgument("t_ratio must be positive");
  auto sweep = [&](double step, ResidualReport* rep) {
    double worst = 0.0;
    for (const auto& p : points) {
      const double x = p[0], t = p[1];
      auto ux_fn = [&](double s) { return kdv_value(sys, s, t); };
      auto ut_fn = [&](double s) { return kdv_value(sys, x, s); };
      const cplx r = kdv_form(form, ux_fn(x), fd::derivative(ut_fn, t, step * t_ratio, 1, accuracy),
                              fd::derivative(ux_fn, x, step, 1, accuracy),
                              fd::derivative(ux_fn, x, step, 3, accuracy));
      worst = std::max(worst, std::abs(r));
      if (rep) rep->push(x, std::abs(r));
    }
    return worst;
  };
  ResidualReport rep;
  const double coarse = sweep(2.0 * h, nullptr);
  sweep(h, &rep);
  rep.order_estimate = convergence_order(coarse, rep.max);
  return rep;
}

ResidualReport kdv5_residual(const EvolvedSystem& sys, const std::vector<std::array<double, 2>>& points,
                             double h, int accuracy) {
  auto sweep = [&](double step, ResidualReport* rep) {
    double worst = 0.0;
    for (const auto& p : points) {
      const double x = p[0], t = p[1];
      auto wx = [&](double s) { return -kdv_value(sys, s, t, Flow::T5); };
      auto wt = [&](double s) { return -kdv_value(sys, x, s, Flow::T5); };
      const cplx w = wx(x);
      const cplx w1 = fd::derivative(wx, x, step, 1, accuracy), w2 = fd::derivative(wx, x, step, 2, accuracy);
      const cplx w3 = fd::derivative(wx, x, step, 3, accuracy), w5 = fd::derivative(wx, x, step, 5, accuracy);
      const cplx r = 16.0 * fd::derivative(wt, t, step, 1, accuracy) -
                     (w5 + 10.0 * w * w3 + 20.0 * w1 * w2 + 30.0 * w * w * w1);
      worst = std::max(worst, std::abs(r));
      if (rep) rep->push(x, std::abs(r));
    }
    return worst;
  };
  ResidualReport rep;
  const double coarse = sweep(2.0 * h, nullptr);
  sweep(h, &rep);
  rep.order_estimate = convergence_order(coarse, rep.max);
  return rep;
}

cplx cauchy_det(const CVec& x, const CVec& y) {
  const auto n = x.size();
  if (y.size() != n) throw InvalidArgument("cauchy_det needs equal lengths");
  cplx num = 1.0, den = 1.0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index s = 0; s < n; ++s) {
      const cplx d = 1.0 - x(r) * y(s);
      if (std::abs(d) < 1e-12) {
        std::ostringstream os;
        os << "1 - x_" << r << " y_" << s << " vanishes";
        throw PoleHit(os.str());
      }
      den *= d;
      if (r < s) num *= (x(r) - x(s)) * (y(r) - y(s));
    }
  return num / den;
}

cplx cauchy_det_direct(const CVec& x, const CVec& y) {
  const auto n = x.size();
  if (y.size() != n) throw InvalidArgument("cauchy_det needs equal lengths");
  // Cauchy matrices with nearby nodes are ill conditioned; extended
  // precision keeps the direct route an honest reference.
  using lcplx = std::complex<long double>;
  Eigen::Matrix<lcplx, Eigen::Dynamic, Eigen::Dynamic> M(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index s = 0; s < n; ++s) {
      const lcplx d = 1.0L - lcplx(x(r)) * lcplx(y(s));
      if (std::abs(d) < 1e-12L) throw PoleHit("1 - x_r y_s vanishes");
      M(r, s) = 1.0L / d;
    }
  if (n == 0) return 1.0;
  const lcplx det = M.fullPivLu().determinant();
  return {static_cast<double>(det.real()), static_cast<double>(det.imag())};
}

cplx soliton_expansion(const LinearSystem& sys, double x, cplx mu) {
  const auto n = sys.n();
  if (n == 0) return 1.0;
  if (n > 24) throw InvalidArgument("subset expansion limited to n <= 24");
  const CMat& A = sys.A();
  if ((A - CMat(A.diagonal().asDiagonal())).cwiseAbs().maxCoeff() != 0.0)
    throw InvalidArgument("soliton_expansion needs diagonal A");
  if (sys.m() != 1) throw InvalidArgument("soliton_expansion needs a scalar system");
  const CVec l = A.diagonal();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j; k < n; ++k)
      if (std::abs(l(j) + l(k)) < 1e-8 * std::max(1.0, l.cwiseAbs().maxCoeff()))
        throw SpectrumCollision("lambda_j + lambda_k vanishes");
  CVec a(n);
  for (Eigen::Index j = 0; j < n; ++j)
    a(j) = sys.B()(j, 0) * sys.C()(0, j) * std::exp(-2.0 * l(j) * x) / (2.0 * l(j));
  CMat pair(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const cplx r = (l(j) - l(k)) / (l(j) + l(k));
      pair(j, k) = r * r;
    }
  cplx total = 0.0;
  const unsigned long subsets = 1ul << n;
  for (unsigned long s = 0; s < subsets; ++s) {
    cplx term = 1.0;
    for (Eigen::Index j = 0; j < n && term != cplx(0.0); ++j) {
      if (!(s >> j & 1ul)) continue;
      term *= mu * a(j);
      for (Eigen::Index k = 0; k < j; ++k)
        if (s >> k & 1ul) term *= pair(j, k);
    }
    total += term;
  }
  return total;
}

double soliton_expansion_gap(const LinearSystem& sys, double x, cplx mu) {
  const cplx e = soliton_expansion(sys, x, mu), t = tau(sys, x, mu);
  return std::abs(e - t) / std::max(std::abs(t), 1e-300);
}

namespace {

// phi_k(x) = C e^{-xV} V^k B for k = 0..K.
std::vector<cplx> toda_moments(const CMat& V, const CMat& B, const CMat& C, int K, double x) {
  std::vector<cplx> phi(static_cast<std::size_t>(K + 1));
  CMat v = matrix_exp(V, x) * B;
  for (int k = 0; k <= K; ++k) {
    phi[static_cast<std::size_t>(k)] = (C * v)(0, 0);
    v = V * v;
  }
  return phi;
}

CMat hankel_of(const std::vector<cplx>& phi, int n, int shift) {
  CMat M(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) M(j, k) = phi[static_cast<std::size_t>(j + k + shift)];
  return M;
}

}  // namespace

cplx toda_tau(const CMat& V, const CMat& B, const CMat& C, int n, double x) {
  if (n < 0) throw InvalidArgument("toda_tau needs n >= 0");
  if (n == 0) return 1.0;
  const auto phi = toda_moments(V, B, C, 2 * n - 2, x);
  return hankel_of(phi, n, 0).partialPivLu().determinant();
}

ResidualReport toda_residual(const CMat& V, const CMat& B, const CMat& C, int N, double x) {
  if (N < 2) throw InvalidArgument("toda_residual needs N >= 2");
  if (B.cols() != 1 || C.rows() != 1) throw InvalidArgument("toda_residual needs scalar B and C");
  const auto phi = toda_moments(V, B, C, 2 * N + 2, x);
  ResidualReport rep;
  std::vector<cplx> tau(static_cast<std::size_t>(N + 1));
  tau[0] = 1.0;
  for (int n = 1; n <= N; ++n) tau[static_cast<std::size_t>(n)] = hankel_of(phi, n, 0).partialPivLu().determinant();
  for (int n = 1; n < N; ++n) {
    const CMat M = hankel_of(phi, n, 0);
    Eigen::PartialPivLU<CMat> lu(M);
    const double scale = std::max(M.cwiseAbs().maxCoeff(), 1e-300);
    if (lu.rcond() < 1e-12 || std::abs(tau[static_cast<std::size_t>(n)]) < 1e-13 * std::pow(scale, n)) {
      std::ostringstream os;
      os << "Hankel minor tau_" << n << " vanishes at x = " << x;
      throw ZeroMinor(os.str());
    }
    // d/dx phi_k = -phi_{k+1}
    const CMat Mi = lu.inverse();
    const CMat X1 = Mi * (-hankel_of(phi, n, 1));
    const CMat X2 = Mi * hankel_of(phi, n, 2);
    const cplx d2 = X2.trace() - (X1 * X1).trace();
    const cplx tn = tau[static_cast<std::size_t>(n)];
    const cplx rhs = tau[static_cast<std::size_t>(n + 1)] * tau[static_cast<std::size_t>(n - 1)] / (tn * tn);
    rep.push(n, std::abs(d2 - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return rep;
}

KPTau kp_tau(const LinearSystem& sys, int n, double x, double y, double t) {
  if (n < 1) throw InvalidArgument("kp_tau needs n >= 1");
  if (sys.m() != 1) throw InvalidArgument("kp_tau needs a scalar system");
  const CMat& A = sys.A();
  const auto dim = sys.n();
  if (dim < n) throw RankDeficient("state dimension smaller than the Wronskian order");
  CMat ctrl(dim, n), obs(n, dim);
  CMat v = sys.B();
  CMat w = sys.C();
  for (int k = 0; k < n; ++k) {
    ctrl.col(k) = v;
    obs.row(k) = w;
    v = A * v;
    w = w * A;
  }
  for (const CMat* K : {&ctrl, &obs}) {
    Eigen::FullPivLU<CMat> lu(*K);
    lu.setThreshold(1e-10);
    if (lu.rank() < n) throw RankDeficient("controllability or observability block is rank deficient");
  }
  const CMat A2 = A * A;
  const CMat Cyt = sys.C() * expm(y * A2 - t * A2 * A);
  const CMat eB = matrix_exp(A, x) * sys.B();
  std::vector<cplx> m(static_cast<std::size_t>(2 * n + 1));
  CMat row = Cyt;
  for (int k = 0; k <= 2 * n; ++k) {
    m[static_cast<std::size_t>(k)] = (row * eB)(0, 0);
    row = row * A;
  }
  const CMat M = hankel_of(m, n, 0);
  Eigen::PartialPivLU<CMat> lu(M);
  KPTau out;
  out.tau = lu.determinant();
  // x-derivatives pull down -A from e^{-xA}.
  const CMat Mi = lu.inverse();
  const CMat X1 = Mi * (-hankel_of(m, n, 1));
  const CMat X2 = Mi * hankel_of(m, n, 2);
  out.u = -2.0 * (X2.trace() - (X1 * X1).trace());
  return out;
}

ResidualReport hirota_residual(const Tau3& tau, const std::vector<std::array<double, 3>>& points, double h,
                               int accuracy) {
  auto sweep = [&](double s, ResidualReport* rep) {
    double worst = 0.0;
    for (const auto& p : points) {
      const double X = p[0], Y = p[1], T = p[2];
      auto fx = [&](double a) { return tau(a, Y, T); };
      auto fy = [&](double a) { return tau(X, a, T); };
      auto ft = [&](double a) { return tau(X, Y, a); };
      const cplx t0 = tau(X, Y, T);
      const cplx tx = fd::derivative(fx, X, s, 1, accuracy), txx = fd::derivative(fx, X, s, 2, accuracy);
      const cplx t3x = fd::derivative(fx, X, s, 3, accuracy), t4x = fd::derivative(fx, X, s, 4, accuracy);
      const cplx ty = fd::derivative(fy, Y, s, 1, accuracy), tyy = fd::derivative(fy, Y, s, 2, accuracy);
      const cplx tt = fd::derivative(ft, T, s, 1, accuracy);
      const cplx txt = fd::derivative(
          [&](double a) { return fd::derivative([&](double b) { return tau(b, Y, a); }, X, s, 1, accuracy); }, T, s, 1,
          accuracy);
      const cplx e = t0 * t4x - 4.0 * tx * t3x + 3.0 * txx * txx - 4.0 * t0 * txt + 4.0 * tx * tt +
                     3.0 * t0 * tyy - 3.0 * ty * ty;
      const double r = std::abs(e) / std::max(std::norm(t0), 1e-300);
      worst = std::max(worst, r);
      if (rep) rep->push(X, r);
    }
    return worst;
  };
  ResidualReport rep;
  const double coarse = sweep(2.0 * h, nullptr);
  sweep(h, &rep);
  rep.order_estimate = convergence_order(coarse, rep.max);
  return rep;
}

namespace {

struct KPFactors {
  CMat Cyt, Byt;
};

KPFactors kp_factors(const CMat& A1, const CMat& A2, const CMat& B, const CMat& C, const KPParams& p,
                     double y, double t) {
  const CMat P1 = A1 * A1 * A1 + p.lambda * A1, P2 = A2 * A2 * A2 + p.lambda * A2;
  KPFactors f;
  f.Cyt = C * expm(t * P1 / p.alpha - y * A1 * A1 / p.beta);
  f.Byt = expm(t * P2 / p.alpha + y * A2 * A2 / p.beta) * B;
  return f;
}

}  // namespace

cplx kp_psi(const CMat& A1, const CMat& A2, const CMat& B, const CMat& C, const KPParams& p, double x,
            double z, double y, double t) {
  const auto f = kp_factors(A1, A2, B, C, p, y, t);
  return (f.Cyt * matrix_exp(A1, x) * matrix_exp(A2, z) * f.Byt)(0, 0);
}

CMat kp_state(const CMat& A1, const CMat& A2, const CMat& B, const CMat& C, const KPParams& p, double x,
              double y, double t) {
  const auto f = kp_factors(A1, A2, B, C, p, y, t);
  const CMat rhs = matrix_exp(A2, x) * f.Byt * f.Cyt * matrix_exp(A1, x);
  return solve_sylvester(A2, A1, rhs);
}

KPScatteringReport kp_scattering_residual(const LinearSystem& sysA, const LinearSystem& sysB,
                                          const KPParams& p,
                                          const std::vector<std::array<double, 4>>& points, double h) {
  if (sysA.n() != sysB.n()) throw InvalidArgument("KP scattering needs a common state space");
  if (sysA.m() != 1 || sysB.m() != 1) throw InvalidArgument("KP scattering needs scalar systems");
  if (p.alpha == 0.0 || p.beta == 0.0) throw InvalidArgument("alpha and beta must be nonzero");
  const CMat& A1 = sysA.A();
  const CMat& A2 = sysB.A();
  const CMat& B = sysB.B();
  const CMat& C = sysA.C();
  spectral_separation(A2, A1);
  KPScatteringReport rep;
  const bool same = (A1 - A2).cwiseAbs().maxCoeff() == 0.0;
  for (const auto& pt : points) {
    const double x = pt[0], z = pt[1], y = pt[2], t = pt[3];
    auto psi = [&](double a, double b, double c, double d) { return kp_psi(A1, A2, B, C, p, a, b, c, d); };
    const cplx s0 = psi(x, z, y, t);
    auto fx = [&](double a) { return psi(a, z, y, t); };
    auto fz = [&](double a) { return psi(x, a, y, t); };
    auto fy = [&](double a) { return psi(x, z, a, t); };
    auto ft = [&](double a) { return psi(x, z, y, a); };
    const double scale = std::max(1.0, std::abs(s0));
    const cplx r5 = p.alpha * fd::derivative(ft, t, h, 1) + fd::derivative(fx, x, h, 3) +
                    fd::derivative(fz, z, h, 3) +
                    p.lambda * (fd::derivative(fx, x, h, 1) + fd::derivative(fz, z, h, 1));
    const cplx r6 = p.beta * fd::derivative(fy, y, h, 1) + fd::derivative(fx, x, h, 2) -
                    fd::derivative(fz, z, h, 2);
    rep.linear_t.push(x, std::abs(r5) / scale);
    rep.linear_y.push(x, std::abs(r6) / scale);

    auto S = [&](double a) { return kp_state(A1, A2, B, C, p, a, y, t); };
    const CMat Sx = S(x);
    const CMat dS = fd::derivative(S, x, h, 1);
    const double sscale = std::max(1.0, Sx.cwiseAbs().maxCoeff());
    rep.sylvester.push(x, (dS + A2 * Sx + Sx * A1).cwiseAbs().maxCoeff() / sscale);

    if (same) {
      const auto n = A1.rows();
      const cplx lhs = (CMat::Identity(n, n) + Sx).partialPivLu().determinant();
      const CMat P = A1 * A1 * A1 + p.lambda * A1;
      const auto hs = LinearSystem::make(A1, expm(2.0 * t * P / p.alpha) * B, C);
      const cplx rhs = tau(hs, x);
      rep.reduction.push(x, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  return rep;
}

}  // namespace taulab::soliton
