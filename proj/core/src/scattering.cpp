#include "taulab/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "taulab/diff.hpp"
#include "taulab/errors.hpp"

namespace taulab::inverse {

namespace {

constexpr double kRcond = 1e-13;

CMat checked_inverse(const CMat& M, const char* what, double x) {
  Eigen::PartialPivLU<CMat> lu(M);
  if (lu.rcond() < kRcond) {
    std::ostringstream os;
    os << what << " numerically singular at x = " << x;
    throw SingularResolvent(os.str());
  }
  return lu.inverse();
}

double max_abs_eig(const CMat& A) {
  if (A.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMat> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

GLKernel::GLKernel(LinearSystem sys, cplx mu) : sys_(std::move(sys)), mu_(mu) {}

CMat GLKernel::operator()(double x, double y) const {
  const auto n = sys_.n();
  if (n == 0) return CMat::Zero(sys_.m(), sys_.m());
  const CMat Ex = matrix_exp(sys_.A(), x);
  const CMat R = Ex * sys_.R0() * Ex;
  const CMat F = checked_inverse(CMat::Identity(n, n) + mu_ * R, "I + mu R_x", x);
  return -sys_.C() * Ex * F * matrix_exp(sys_.A(), y) * sys_.B();
}

GLKernel gl_kernel(const LinearSystem& sys, cplx mu) { return GLKernel(sys, mu); }

fredholm::HalfLineGrid gl_tail_grid(const LinearSystem& sys) {
  if (sys.n() == 0) return fredholm::make_panel_grid(0.0, 1.0, 1, 16);
  const double r = sys.min_re_spectrum();
  if (!(r > 0.0)) throw TailTooFat("Gelfand-Levitan integral needs min Re(lambda) > 0");
  const double L = 30.0 / r;
  const double panel = std::min(1.0, 3.0 / std::max(max_abs_eig(sys.A()), 1e-12));
  const int panels = std::max(1, static_cast<int>(std::ceil(L / panel)));
  return fredholm::make_panel_grid(0.0, L, panels, 16);
}

double gl_residual(const GLKernel& T, double x, double y, const fredholm::HalfLineGrid& grid) {
  const auto& sys = T.system();
  const auto m = sys.m();
  if (sys.n() == 0) return 0.0;
  CMat integral = CMat::Zero(m, m);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double z = x + grid.nodes[i];
    integral += grid.weights[i] * T(x, z) * scattering(sys, z + y);
  }
  const double zend = x + grid.a + grid.T;
  const double tail = (T(x, zend) * scattering(sys, zend + y)).cwiseAbs().maxCoeff();
  if (tail > 1e-12) {
    std::ostringstream os;
    os << "Gelfand-Levitan integrand still " << tail << " at z = " << zend;
    throw TailTooFat(os.str());
  }
  const CMat r = T(x, y) + scattering(sys, x + y) + T.mu() * integral;
  return r.cwiseAbs().maxCoeff();
}

double gl_residual(const GLKernel& T, double x, double y) {
  return gl_residual(T, x, y, gl_tail_grid(T.system()));
}

double trace_identity_residual(const LinearSystem& sys, cplx mu, double x) {
  if (sys.n() == 0) return 0.0;
  const cplx lhs = mu * GLKernel(sys, mu)(x, x).trace();
  return std::abs(lhs - log_tau_d1(sys, x, mu));
}

MiuraPair::MiuraPair(LinearSystem sys, cplx mu) : sys_(std::move(sys)), mu_(mu) {
  if (sys_.m() != 1) throw InvalidArgument("Miura pair needs scalar input and output");
  if (mu_ == cplx(0.0)) throw InvalidArgument("Miura pair needs mu != 0");
}

MiuraSample MiuraPair::at(double x) const {
  MiuraSample s{};
  const auto n = sys_.n();
  if (n == 0) return s;
  const CMat& A = sys_.A();
  const CMat& B = sys_.B();
  const CMat& C = sys_.C();
  const CMat E = matrix_exp(A, x);
  const CMat R = E * sys_.R0() * E;
  const CMat G = E * B * C * E;
  const cplx mu2 = mu_ * mu_;
  const CMat M = checked_inverse(CMat::Identity(n, n) - mu2 * R * R, "I - mu^2 R_x^2", x);
  const CMat dM = -mu2 * M * (G * R + R * G) * M;
  const CMat EB = E * B, CE = C * E;

  s.v_op = -(CE * M * EB)(0, 0);
  s.w_op = mu_ * (CE * M * R * EB)(0, 0);
  s.dv_op = -(-(C * A * E * M * EB) + CE * dM * EB - CE * M * E * A * B)(0, 0);
  s.dw_op = mu_ * (-(C * A * E * M * R * EB) + CE * dM * R * EB - CE * M * G * EB -
                   CE * M * R * E * A * B)(0, 0);

  const cplx d1p = log_tau_d1(sys_, x, mu_), d1m = log_tau_d1(sys_, x, -mu_);
  const cplx d2p = log_tau_d2(sys_, x, mu_), d2m = log_tau_d2(sys_, x, -mu_);
  s.v_logdet = (d1p - d1m) / (2.0 * mu_);
  s.w_logdet = (d1p + d1m) / (2.0 * mu_);
  s.dv_logdet = (d2p - d2m) / (2.0 * mu_);
  s.dw_logdet = (d2p + d2m) / (2.0 * mu_);
  return s;
}

double MiuraPair::constraint_residual(double x) const {
  const auto s = at(x);
  return std::abs(s.dw_op / (2.0 * mu_) + s.v_op * s.v_op);
}

double MiuraPair::miura_residual(double x) const {
  const auto s = at(x);
  const cplx u = -2.0 * log_tau_d2(sys_, x, -mu_);
  return std::abs(s.dv_op + s.v_op * s.v_op - u);
}

double MiuraPair::route_gap(double x) const {
  const auto s = at(x);
  return std::max({std::abs(s.v_op - s.v_logdet), std::abs(s.w_op - s.w_logdet),
                   std::abs(s.dv_op - s.dv_logdet), std::abs(s.dw_op - s.dw_logdet)});
}

MiuraPair miura_pair(const LinearSystem& sys, cplx mu) { return MiuraPair(sys, mu); }

cplx baker_akhiezer(const LinearSystem& sys, double x, cplx lambda) {
  const auto n = sys.n();
  const cplx ex = std::exp(lambda * x);
  if (n == 0) return ex;
  const CMat& A = sys.A();
  Eigen::ComplexEigenSolver<CMat> es(A, false);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (const cplx& l : es.eigenvalues())
    if (std::abs(lambda - l) < 1e-10 * scale) {
      std::ostringstream os;
      os << "lambda = " << lambda << " hits the eigenvalue " << l;
      throw SpectralPole(os.str());
    }
  const CMat I = CMat::Identity(n, n);
  const CMat E = matrix_exp(A, x);
  const CMat R = E * sys.R0() * E;
  const CMat factor = (lambda * I + A) * (lambda * I - A).inverse();
  Eigen::PartialPivLU<CMat> lu(I + R);
  if (lu.rcond() < kRcond) throw SingularResolvent("tau vanishes in baker_akhiezer");
  return ex * (I + R * factor).partialPivLu().determinant() / lu.determinant();
}

ResidualReport schrodinger_residual(const LinearSystem& sys, cplx lambda,
                                    const std::vector<double>& x_grid, double h) {
  auto psi = [&](double s) { return baker_akhiezer(sys, s, lambda); };
  auto sweep = [&](double step, ResidualReport* rep) {
    double scale = 0.0, worst = 0.0;
    std::vector<double> raw;
    for (double x : x_grid) {
      const cplx p = psi(x);
      const cplx d2 = fd::derivative(psi, x, step, 2, 4);
      const cplx r = -d2 + potential(sys, x) * p + lambda * lambda * p;
      scale = std::max(scale, std::abs(p));
      raw.push_back(std::abs(r));
    }
    scale = std::max(scale, 1e-300);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      worst = std::max(worst, raw[i] / scale);
      if (rep) rep->push(x_grid[i], raw[i] / scale);
    }
    return worst;
  };
  ResidualReport rep;
  const double coarse = sweep(2.0 * h, nullptr);
  sweep(h, &rep);
  rep.order_estimate = convergence_order(coarse, rep.max);
  return rep;
}

cplx blaschke_ratio(const fredholm::DiscretizedKernel& K, cplx mu) {
  cplx r = 1.0;
  for (const cplx& z : fredholm::kernel_eigenvalues(K)) r *= (1.0 + mu * z) / (1.0 - mu * z);
  return r;
}

}  // namespace taulab::inverse
