#include "taulab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "taulab/diff.hpp"
#include "taulab/errors.hpp"
#include "taulab/fredholm.hpp"
#include "taulab/linsys.hpp"

namespace taulab::elliptic {

namespace {

CMat J2() {
  CMat J(2, 2);
  J << 0.0, -1.0, 1.0, 0.0;
  return J;
}

void check_nome(double q) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("nome must satisfy 0 < q < 1");
}

struct Pieces {
  CMat Ex, R, G, F;
};

Pieces pieces(const PeriodicSystem& sys, cplx x, bool check) {
  Pieces p;
  const auto n = sys.A.rows();
  p.Ex = matrix_exp(sys.A, x);
  p.R = p.Ex * sys.E * p.Ex;
  p.G = p.Ex * sys.B * sys.C * p.Ex;
  Eigen::PartialPivLU<CMat> lu(CMat::Identity(n, n) + p.R);
  if (check && lu.rcond() < 1e-13) {
    std::ostringstream os;
    os << "periodic tau vanishes near x = " << x;
    throw SingularResolvent(os.str());
  }
  p.F = lu.inverse();
  return p;
}

cplx log_theta_d1(cplx z, double q) { return theta1(z, q, 1) / theta1(z, q, 0); }

cplx log_theta_d2(cplx z, double q) {
  const cplx t = theta1(z, q, 0), t1 = theta1(z, q, 1), t2 = theta1(z, q, 2);
  return (t * t2 - t1 * t1) / (t * t);
}

cplx log_theta_d3(cplx z, double q) {
  const cplx t = theta1(z, q, 0), t1 = theta1(z, q, 1), t2 = theta1(z, q, 2), t3 = theta1(z, q, 3);
  const cplx a = t1 / t;
  return t3 / t - 3.0 * a * t2 / t + 2.0 * a * a * a;
}

// Nearest point of pi Z + i|log q| Z to w.
double lattice_distance(cplx w, double q) {
  const double L = -std::log(q);
  const double k = std::round(w.imag() / L), j = std::round(w.real() / M_PI);
  return std::abs(w - cplx(j * M_PI, k * L));
}

void check_off_lattice(cplx w, double q) {
  if (lattice_distance(w, q) < 1e-10) {
    std::ostringstream os;
    os << "argument " << w << " is a lattice point";
    throw LatticePoint(os.str());
  }
}

// p for omega1 = pi/2 at nome q.
cplx wp0(cplx z, double q, double c0) {
  check_off_lattice(z, q);
  return -log_theta_d2(z, q) + c0;
}

cplx wp0_prime(cplx z, double q) {
  check_off_lattice(z, q);
  return -log_theta_d3(z, q);
}

double theta_c0(double q) { return (theta1(0.0, q, 3) / (3.0 * theta1(0.0, q, 1))).real(); }

}  // namespace

double PeriodicSystem::tail_trace() const {
  const double t = 2.0 * std::pow(q, 2 * (N + 1)) / (1.0 - q * q);
  return kind == Kind::Full ? 2.0 * t : t;
}

double PeriodicSystem::structure_residual() const { return (A * E + E * A - B * C).norm(); }

double PeriodicSystem::periodicity_residual() const {
  const int skip = kind == Kind::Regular ? 0 : 2;
  const int halves = kind == Kind::Full ? 2 : 1;
  const Eigen::Index per = A.rows() / halves;
  double worst = 0.0;
  for (int h = 0; h < halves; ++h) {
    const Eigen::Index off = h * per + skip, len = per - skip;
    if (len <= 0) continue;
    const CMat Ab = A.block(off, off, len, len);
    worst = std::max(worst, (matrix_exp(Ab, 2.0 * M_PI) - CMat::Identity(len, len)).norm());
  }
  return worst;
}

int default_truncation(double q) {
  check_nome(q);
  return std::max(1, static_cast<int>(std::ceil(std::log(1e-14) / (2.0 * std::log(q)))));
}

PeriodicSystem build_system(double q, int N, PeriodicSystem::Kind kind) {
  check_nome(q);
  if (N < 1) throw InvalidArgument("truncation N must be >= 1");
  const CMat J = J2(), I = CMat::Identity(2, 2);
  const cplx i(0.0, 1.0);
  const bool lead = kind != PeriodicSystem::Kind::Regular;
  const Eigen::Index half = 2 * N + (lead ? 2 : 0);
  const Eigen::Index dim = kind == PeriodicSystem::Kind::Full ? 2 * half : half;
  PeriodicSystem s;
  s.q = q;
  s.N = N;
  s.kind = kind;
  s.A = CMat::Zero(dim, dim);
  s.B = CMat::Zero(dim, dim);
  s.C = CMat::Zero(dim, dim);
  s.E = CMat::Zero(dim, dim);
  auto place = [&](Eigen::Index off, bool conj) {
    Eigen::Index o = off;
    if (lead) {
      const cplx c = conj ? -i : i;
      s.A.block(o, o, 2, 2) = 0.5 * J;
      s.B.block(o, o, 2, 2) = -c * I;
      s.C.block(o, o, 2, 2) = I;
      s.E.block(o, o, 2, 2) = c * J;
      o += 2;
    }
    for (int n = 1; n <= N; ++n, o += 2) {
      const double q2n = std::pow(q, 2 * n);
      s.A.block(o, o, 2, 2) = J;
      s.B.block(o, o, 2, 2) = -2.0 * q2n * I;
      s.C.block(o, o, 2, 2) = J;
      s.E.block(o, o, 2, 2) = -q2n * I;
    }
  };
  place(0, false);
  if (kind == PeriodicSystem::Kind::Full) place(half, true);
  return s;
}

PeriodicSystem build_theta_system(double q, int N) { return build_system(q, N, PeriodicSystem::Kind::Full); }
PeriodicSystem build_half_system(double q, int N) { return build_system(q, N, PeriodicSystem::Kind::Half); }
PeriodicSystem build_regular_system(double q, int N) {
  return build_system(q, N, PeriodicSystem::Kind::Regular);
}

cplx tau_periodic(const PeriodicSystem& sys, cplx x) {
  const auto n = sys.A.rows();
  const CMat Ex = matrix_exp(sys.A, x);
  return (CMat::Identity(n, n) + Ex * sys.E * Ex).partialPivLu().determinant();
}

cplx log_tau_periodic_d1(const PeriodicSystem& sys, cplx x) {
  const auto p = pieces(sys, x, true);
  return -(p.F * p.G).trace();
}

cplx log_tau_periodic_d2(const PeriodicSystem& sys, cplx x) {
  const auto p = pieces(sys, x, true);
  const CMat FG = p.F * p.G;
  return -((FG * FG).trace() - (p.F * (sys.A * p.G + p.G * sys.A)).trace());
}

cplx theta1(cplx z, double q, int derivative) {
  check_nome(q);
  if (derivative < 0 || derivative > 3) throw InvalidArgument("theta1 derivatives up to order 3");
  cplx s = 0.0;
  const double growth = std::abs(z.imag());
  for (int n = 0; n < 400; ++n) {
    const double w = 2.0 * n + 1.0;
    const double lq = (n + 0.5) * (n + 0.5) * std::log(q);
    const double mag = std::exp(lq + w * growth) * std::pow(w, derivative);
    const cplx arg = w * z + derivative * M_PI / 2.0;
    const double sign = (n % 2) ? -1.0 : 1.0;
    s += sign * 2.0 * std::exp(lq) * std::pow(w, derivative) * std::sin(arg);
    if (n > 2 && mag < 1e-18 * std::max(std::abs(s), 1e-300)) break;
  }
  return s;
}

cplx theta1_series(cplx z, double q) {
  check_nome(q);
  const cplx i(0.0, 1.0);
  cplx s = 0.0;
  for (int k = 0; k < 400; ++k) {
    cplx pair = 0.0;
    // n = 1 + k and n = -k share the exponent (n - 1/2)^2
    for (int n : {1 + k, -k}) {
      const double e = (n - 0.5) * (n - 0.5) * std::log(q);
      const double sign = (std::abs(n) % 2) ? -1.0 : 1.0;
      pair += sign * std::exp((2.0 * n - 1.0) * i * z + e);
    }
    s += pair;
    if (k > 2 && std::abs(pair) < 1e-18 * std::max(std::abs(s), 1e-300)) break;
  }
  return i * s;
}

cplx theta1_product(cplx z, double q) {
  check_nome(q);
  cplx p = 2.0 * std::pow(q, 0.25) * std::sin(z);
  for (int n = 1; n < 10000; ++n) {
    const double q2n = std::pow(q, 2 * n);
    p *= (1.0 - q2n) * (1.0 - 2.0 * q2n * std::cos(2.0 * z) + q2n * q2n);
    if (q2n < 1e-18) break;
  }
  return p;
}

cplx theta_product_expression(cplx x, double q) {
  double pr = 1.0;
  for (int n = 1; n < 10000; ++n) {
    const double q2n = std::pow(q, 2 * n);
    pr *= (1.0 - q2n);
    if (q2n < 1e-18) break;
  }
  const cplx t = theta1(x, q), ts = std::conj(theta1(std::conj(x), q));
  return t * ts / (std::sqrt(q) * pr * pr);
}

cplx half_product_expression(cplx x, double q, int N) {
  cplx p = 2.0 * cplx(0.0, 1.0) * std::sin(x);
  for (int n = 1; n <= N; ++n) {
    const double q2n = std::pow(q, 2 * n);
    p *= 1.0 - 2.0 * q2n * std::cos(2.0 * x) + q2n * q2n;
  }
  return p;
}

double EllipticParams::scale() const { return M_PI / (2.0 * omega1); }

EllipticParams EllipticParams::from_periods(double omega1, double W) {
  if (!(omega1 > 0.0 && W > 0.0)) throw InvalidArgument("half-periods must be positive");
  EllipticParams p;
  p.omega1 = omega1;
  p.W = W;
  p.q = std::exp(-M_PI * W / omega1);
  check_nome(p.q);
  p.c0 = theta_c0(p.q);
  p.e1 = weierstrass_p(omega1, p).real();
  p.e2 = weierstrass_p(cplx(omega1, W), p).real();
  p.e3 = weierstrass_p(cplx(0.0, W), p).real();
  return p;
}

EllipticParams EllipticParams::from_nome(double q) {
  check_nome(q);
  return from_periods(M_PI / 2.0, -std::log(q) / 2.0);
}

namespace {

// For q near 1 the theta series cancels catastrophically. Rotating the
// lattice by -i swaps the half-periods: p(z) = -p'(-iz) with omega1' = W.
constexpr double kDualNome = 0.2;

// Stencil accuracy for the x-derivative residual checks; elliptic
// potentials have poles nearby, so low orders waste the step budget.
constexpr int kFdAccuracy = 8;

struct Dual {
  double s, q, c0;
};

Dual dual_of(const EllipticParams& p) {
  Dual d;
  d.s = M_PI / (2.0 * p.W);
  d.q = std::exp(-M_PI * p.omega1 / p.W);
  d.c0 = theta_c0(d.q);
  return d;
}

}  // namespace

cplx weierstrass_p(cplx x, const EllipticParams& p) {
  if (p.q > kDualNome) {
    const Dual d = dual_of(p);
    const cplx z = cplx(0.0, -1.0) * x;
    return -d.s * d.s * wp0(d.s * z, d.q, d.c0);
  }
  const double s = p.scale();
  return s * s * wp0(s * x, p.q, p.c0);
}

cplx weierstrass_p_prime(cplx x, const EllipticParams& p) {
  if (p.q > kDualNome) {
    const Dual d = dual_of(p);
    const cplx z = cplx(0.0, -1.0) * x;
    return cplx(0.0, 1.0) * d.s * d.s * d.s * wp0_prime(d.s * z, d.q);
  }
  const double s = p.scale();
  return s * s * s * wp0_prime(s * x, p.q);
}

cplx weierstrass_zeta(cplx x, const EllipticParams& p) {
  if (p.q > kDualNome) {
    const Dual d = dual_of(p);
    const cplx z = cplx(0.0, -1.0) * x;
    check_off_lattice(d.s * z, d.q);
    return cplx(0.0, -1.0) * (d.s * log_theta_d1(d.s * z, d.q) - d.s * d.s * d.c0 * z);
  }
  const double s = p.scale();
  check_off_lattice(s * x, p.q);
  return s * log_theta_d1(s * x, p.q) - s * s * p.c0 * x;
}

double eta1(const EllipticParams& p) { return weierstrass_zeta(p.omega1, p).real(); }

double g2(const EllipticParams& p) { return 2.0 * (p.e1 * p.e1 + p.e2 * p.e2 + p.e3 * p.e3); }

double cubic_residual(cplx x, const EllipticParams& p) {
  const cplx P = weierstrass_p(x, p), dP = weierstrass_p_prime(x, p);
  const cplx cubic = 4.0 * (P - p.e1) * (P - p.e2) * (P - p.e3);
  const double r1 = std::abs(dP * dP - cubic) / std::max(1.0, std::abs(dP * dP));
  const cplx d2 = fd::derivative([&](double h) { return weierstrass_p_prime(x + h, p); }, 0.0, 1e-3, 1, 6);
  const double r2 = std::abs(d2 - 6.0 * P * P + g2(p) / 2.0) / std::max(1.0, std::abs(P * P));
  return std::max(r1, r2);
}

cplx periodic_potential(const PeriodicSystem& sys, double x) { return -2.0 * log_tau_periodic_d2(sys, x); }

cplx periodic_potential_trace(const PeriodicSystem& sys, double x) {
  const auto p = pieces(sys, x, true);
  return -4.0 * (p.F * sys.A * p.F * p.G).trace();
}

cplx periodic_potential_wp(double x, double q, double x_c) {
  const double c0 = theta_c0(q);
  const double e1 = wp0(M_PI / 2.0, q, c0).real();
  return 4.0 * wp0(x, q, c0) - 4.0 * e1 - 4.0 * log_theta_d2(x_c, q);
}

PotentialConstant potential_constant(double q, int N) {
  const auto sys = build_theta_system(q, N);
  const double c0 = theta_c0(q);
  const double e1 = wp0(M_PI / 2.0, q, c0).real();
  const double x = 1.1;
  PotentialConstant pc;
  pc.fitted = (periodic_potential_trace(sys, x) - 4.0 * wp0(x, q, c0)).real();
  pc.half_period = -4.0 * e1 - 4.0 * log_theta_d2(M_PI / 2.0, q).real();
  pc.literal_half = -4.0 * e1 - 4.0 * log_theta_d2(0.5, q).real();
  return pc;
}

cplx scattering_periodic(const PeriodicSystem& sys, double x) {
  return (sys.C * matrix_exp(sys.A, x) * sys.B).trace();
}

double scattering_full_exact(double q, double x) { return -8.0 * q * q * std::sin(x) / (1.0 - q * q); }

cplx scattering_half_exact(double q, double x) {
  return cplx(0.0, -2.0 * std::cos(x / 2.0)) - 4.0 * q * q * std::sin(x) / (1.0 - q * q);
}

double gl_identity_residual(const PeriodicSystem& sys, double x) {
  const auto g = fredholm::make_panel_grid(x, x + M_PI / 2.0, 4, 16);
  const auto n = sys.A.rows();
  CMat I = CMat::Zero(n, n);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const CMat Ez = matrix_exp(sys.A, g.nodes[k]);
    I += g.weights[k] * Ez * sys.B * sys.C * Ez;
  }
  const CMat Ex = matrix_exp(sys.A, x);
  return (I - 2.0 * Ex * sys.E * Ex).cwiseAbs().maxCoeff();
}

double periodic_gl_residual(const PeriodicSystem& sys, double x, double y) {
  const CMat Eh = matrix_exp(sys.A, M_PI / 2.0);
  const double anti = (Eh * sys.E * Eh + sys.E).cwiseAbs().maxCoeff();
  if (anti > 1e-12 * std::max(1.0, sys.E.cwiseAbs().maxCoeff())) {
    std::ostringstream os;
    os << "e^{-pi A/2} E e^{-pi A/2} = -E fails by " << anti;
    throw HypothesisFailed(os.str());
  }
  const auto p = pieces(sys, x, true);
  auto T = [&](double s) -> CMat { return -sys.C * p.Ex * p.F * matrix_exp(sys.A, s) * sys.B; };
  auto Phi = [&](double s) -> CMat { return sys.C * matrix_exp(sys.A, s) * sys.B; };
  const auto g = fredholm::make_panel_grid(x, x + M_PI / 2.0, 4, 16);
  CMat integral = CMat::Zero(sys.B.cols(), sys.B.cols());
  for (std::size_t k = 0; k < g.size(); ++k) integral += g.weights[k] * T(g.nodes[k]) * Phi(g.nodes[k] + y);
  return (Phi(x + y) + T(y) + 0.5 * integral).cwiseAbs().maxCoeff();
}

cplx lame_psi(cplx x, cplx a, const EllipticParams& p) {
  const double s = p.scale();
  check_off_lattice(s * x, p.q);
  check_off_lattice(s * a, p.q);
  const cplx t1 = theta1(0.0, p.q, 1);
  return -s * t1 * theta1(s * (x - a), p.q) / (theta1(s * x, p.q) * theta1(s * a, p.q)) *
         std::exp(s * x * log_theta_d1(s * a, p.q));
}

cplx lame_psi_prime(cplx x, cplx a, const EllipticParams& p) {
  const double s = p.scale();
  const cplx ratio = s * (log_theta_d1(s * (x - a), p.q) - log_theta_d1(s * x, p.q) + log_theta_d1(s * a, p.q));
  return lame_psi(x, a, p) * ratio;
}

ResidualReport lame_eigen_residual(cplx a, const EllipticParams& p, const std::vector<double>& x_grid, double h) {
  const cplx pa = weierstrass_p(a, p);
  auto sweep = [&](double step, ResidualReport* rep) {
    double scale = 0.0;
    std::vector<double> raw;
    for (double x : x_grid) {
      auto psi = [&](double s) { return lame_psi(s, a, p); };
      const cplx v = psi(x);
      const cplx r = -fd::derivative(psi, x, step, 2, kFdAccuracy) + 2.0 * weierstrass_p(x, p) * v + pa * v;
      raw.push_back(std::abs(r));
      scale = std::max(scale, std::abs(v));
    }
    double worst = 0.0;
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

double lame_product_residual(cplx x, cplx a, const EllipticParams& p) {
  return std::abs(lame_psi(x, a, p) * lame_psi(-x, a, p) - (weierstrass_p(a, p) - weierstrass_p(x, p)));
}

double addition_rule_residual(cplx x, cplx y, cplx a, const EllipticParams& p) {
  const cplx lhs = lame_psi(x + y, a, p);
  const cplx rhs = (lame_psi_prime(x, a, p) * lame_psi(y, a, p) - lame_psi(x, a, p) * lame_psi_prime(y, a, p)) /
                   (weierstrass_p(y, p) - weierstrass_p(x, p));
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

cplx lame_trig_psi(cplx x, cplx a) {
  return -std::sin(x - a) / (std::sin(x) * std::sin(a)) * std::exp(x * std::cos(a) / std::sin(a));
}

double trig_addition_residual(cplx x, cplx y, cplx a) {
  auto cot = [](cplx z) { return std::cos(z) / std::sin(z); };
  auto dpsi = [&](cplx z) { return lame_trig_psi(z, a) * (cot(z - a) - cot(z) + cot(a)); };
  auto cosec2 = [](cplx z) { return 1.0 / (std::sin(z) * std::sin(z)); };
  const cplx lhs = lame_trig_psi(x + y, a);
  const cplx rhs = (dpsi(x) * lame_trig_psi(y, a) - lame_trig_psi(x, a) * dpsi(y)) / (cosec2(y) - cosec2(x));
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

double trig_limit_gap(double x, double q) {
  const auto p = EllipticParams::from_nome(q);
  const double s = std::sin(x);
  return std::abs(weierstrass_p(x, p) - (1.0 / (s * s) - 1.0 / 3.0));
}

double hyperbolic_limit_gap(double x, double omega1, double W) {
  const auto p = EllipticParams::from_periods(omega1, W);
  const double k = M_PI / (2.0 * W);
  const double sh = std::sinh(k * x);
  return std::abs(weierstrass_p(x, p) - (k * k / (sh * sh) + k * k / 3.0));
}

double travelling_wave_speed(const EllipticParams& p) {
  const double s = p.scale();
  return 3.0 * (-4.0 * s * s * p.c0);
}

double travelling_wave_speed_literal(const EllipticParams& p) {
  // 4(e1+e2+e3) - 3e1 - (3/2)(log theta_1 theta_1^*)''(1/2), taken literally
  const double s = p.scale();
  const double d2 = 2.0 * s * s * log_theta_d2(s * 0.5, p.q).real();
  return 4.0 * (p.e1 + p.e2 + p.e3) - 3.0 * p.e1 - 1.5 * d2;
}

ResidualReport travelling_wave_residual(const EllipticParams& p, double c,
                                        const std::vector<std::array<double, 2>>& points, double h) {
  const double s = p.scale();
  const double K = -4.0 * s * s * p.c0;
  auto u = [&](double x, double t) { return 4.0 * weierstrass_p(x - c * t, p) + K; };
  auto sweep = [&](double step, ResidualReport* rep) {
    double worst = 0.0;
    for (const auto& pt : points) {
      const double x = pt[0], t = pt[1];
      auto ux = [&](double a) { return u(a, t); };
      auto ut = [&](double a) { return u(x, a); };
      const cplx r = fd::derivative(ux, x, step, 3, kFdAccuracy) -
                     3.0 * ux(x) * fd::derivative(ux, x, step, 1, kFdAccuracy) -
                     fd::derivative(ut, t, step, 1, kFdAccuracy);
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

double zero_set_error(double q, int N, int max_k) {
  const auto sys = build_half_system(q, N);
  const double L = -std::log(q);
  double worst = 0.0;
  for (int j = 0; j <= 1; ++j)
    for (int k = -std::min(max_k, N); k <= std::min(max_k, N); ++k) {
      const cplx target(j * M_PI, k * L);
      cplx z = target + cplx(0.05, 0.03);
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const auto pc = pieces(sys, z, false);
        const cplx d1 = -(pc.F * pc.G).trace();
        if (!std::isfinite(d1.real()) || !std::isfinite(d1.imag())) {
          converged = true;  // landed exactly on the zero
          break;
        }
        const cplx step = 1.0 / d1;
        z -= step;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) {
          converged = true;
          break;
        }
      }
      if (!converged) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, lattice_distance(z, q));
    }
  return worst;
}

std::vector<cplx> symmetric_poles(int m, cplx c, const EllipticParams& p) {
  if (m < 1) throw InvalidArgument("need at least one pole");
  std::vector<cplx> x(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) x[static_cast<std::size_t>(j)] = c + 2.0 * p.omega1 * j / m;
  return x;
}

namespace {

using Poles = std::vector<cplx>;

void check_collisions(const Poles& x, const EllipticParams& p) {
  const double s = p.scale();
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t k = j + 1; k < x.size(); ++k)
      if (lattice_distance(s * (x[j] - x[k]), p.q) < 1e-6) {
        std::ostringstream os;
        os << "poles " << j << " and " << k << " collide modulo the lattice";
        throw CollisionDetected(os.str());
      }
}

Poles velocities(const Poles& x, const EllipticParams& p) {
  Poles v(x.size(), 0.0);
  for (std::size_t k = 0; k < x.size(); ++k)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != k) v[k] += 6.0 * weierstrass_p(x[j] - x[k], p);
  return v;
}

double constraint(const Poles& x, const EllipticParams& p) {
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != k) s += weierstrass_p_prime(x[j] - x[k], p);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

Poles axpy(const Poles& x, double a, const Poles& d) {
  Poles r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + a * d[i];
  return r;
}

}  // namespace

PoleTrajectory pole_dynamics(const std::vector<cplx>& x0, const EllipticParams& p, double t_max, double dt,
                             const std::vector<double>& z_grid) {
  if (x0.empty()) throw InvalidArgument("need at least one pole");
  if (!(dt > 0.0) || t_max < 0.0) throw InvalidArgument("need dt > 0 and t_max >= 0");
  check_collisions(x0, p);
  const double c_init = constraint(x0, p);
  if (c_init > 1e-8) {
    std::ostringstream os;
    os << "initial poles violate the constraint by " << c_init;
    throw ConstraintViolated(os.str());
  }
  PoleTrajectory tr;
  const int steps = static_cast<int>(std::lround(t_max / dt));
  Poles x = x0;
  tr.t.push_back(0.0);
  tr.poles.push_back(x);
  tr.constraint.push_back(c_init);
  for (int i = 1; i <= steps; ++i) {
    const Poles k1 = velocities(x, p);
    const Poles k2 = velocities(axpy(x, dt / 2, k1), p);
    const Poles k3 = velocities(axpy(x, dt / 2, k2), p);
    const Poles k4 = velocities(axpy(x, dt, k3), p);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    check_collisions(x, p);
    tr.t.push_back(i * dt);
    tr.poles.push_back(x);
    const double c = constraint(x, p);
    tr.constraint.push_back(c);
    tr.constraint_drift = std::max(tr.constraint_drift, std::abs(c - c_init));
  }
  auto u_at = [&](double z, const Poles& xs) {
    cplx u = 0.0;
    for (const cplx& xj : xs) u += 2.0 * weierstrass_p(z - xj, p);
    return u;
  };
  // u_t from a fourth-order difference of the stored trajectory; z
  // derivatives analytic via p''' = 12 p p'.
  const auto w1 = fd::central_weights(1, 2);
  for (int i = 2; i + 2 <= steps; ++i) {
    for (double z : z_grid) {
      cplx ut = 0.0;
      for (int k = -2; k <= 2; ++k) ut += w1[static_cast<std::size_t>(k + 2)] * u_at(z, tr.poles[static_cast<std::size_t>(i + k)]);
      ut /= dt;
      cplx u = 0.0, uz = 0.0, uzzz = 0.0;
      for (const cplx& xj : tr.poles[static_cast<std::size_t>(i)]) {
        const cplx P = weierstrass_p(z - xj, p), dP = weierstrass_p_prime(z - xj, p);
        u += 2.0 * P;
        uz += 2.0 * dP;
        uzzz += 24.0 * P * dP;
      }
      tr.kdv.push(tr.t[static_cast<std::size_t>(i)], std::abs(ut - 0.5 * uzzz + 3.0 * u * uz));
    }
  }
  return tr;
}

}  // namespace taulab::elliptic
