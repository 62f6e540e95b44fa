#pragma once

#include <array>
#include <vector>

#include "taulab/report.hpp"
#include "taulab/types.hpp"

namespace taulab::elliptic {

// Block-diagonal periodic system (A, B, C, E) with AE + EA = BC.
//  Half system: a leading block A = J/2, B = -iI, C = I, E = iJ followed by
//  blocks n = 1..N with A = J, B = -2q^{2n} I, C = J, E = -q^{2n} I.
//  Full system: the half system plus its complex conjugate.
//  Regular system: the blocks n = 1..N only.
struct PeriodicSystem {
  enum class Kind { Half, Full, Regular };
  double q = 0.0;
  int N = 0;
  Kind kind = Kind::Full;
  CMat A, B, C, E;

  // |trace E| of the dropped blocks n > N (both halves for Full).
  double tail_trace() const;
  // ||AE + EA - BC||_F
  double structure_residual() const;
  // ||e^{-2 pi A} - I|| over the blocks with A = J (the leading J/2 block has
  // period 4 pi and is excluded).
  double periodicity_residual() const;
};

int default_truncation(double q);
PeriodicSystem build_theta_system(double q, int N);
PeriodicSystem build_half_system(double q, int N);
PeriodicSystem build_regular_system(double q, int N);
PeriodicSystem build_system(double q, int N, PeriodicSystem::Kind kind);

// det(I + e^{-xA} E e^{-xA}) at complex x.
cplx tau_periodic(const PeriodicSystem& sys, cplx x);
// d/dx log tau = -tr(F e^{-xA} BC e^{-xA}).
cplx log_tau_periodic_d1(const PeriodicSystem& sys, cplx x);
cplx log_tau_periodic_d2(const PeriodicSystem& sys, cplx x);

// Jacobi theta_1 in the nome q: 2 sum (-1)^n q^{(n+1/2)^2} sin((2n+1)z) and
// its derivatives up to order 3; period pi, zeros at j pi + i k |log q|.
cplx theta1(cplx z, double q, int derivative = 0);
// The complex-exponential series i sum (-1)^n exp((2n-1) i z) q^{(n-1/2)^2}.
cplx theta1_series(cplx z, double q);
// 2 q^{1/4} sin z prod (1 - q^{2n})(1 - 2q^{2n} cos 2z + q^{4n}).
cplx theta1_product(cplx z, double q);
// q^{-1/2} prod(1 - q^{2n})^{-2} theta_1(x) conj(theta_1(conj x)); equals the
// full-system tau in the limit N -> infinity.
cplx theta_product_expression(cplx x, double q);
// 2i sin x prod_{n<=N} (1 - 2q^{2n} cos 2x + q^{4n}).
cplx half_product_expression(cplx x, double q, int N);

// Rectangular lattice with real half-period omega1 and omega2 = i W.
struct EllipticParams {
  double omega1 = 0.0, W = 0.0, q = 0.0;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  double c0 = 0.0;  // theta_1'''(0) / (3 theta_1'(0))
  double scale() const;  // pi / (2 omega1)
  cplx omega2() const { return cplx(0.0, W); }

  static EllipticParams from_nome(double q);  // omega1 = pi/2
  static EllipticParams from_periods(double omega1, double W);
};

cplx weierstrass_p(cplx x, const EllipticParams& p);
cplx weierstrass_p_prime(cplx x, const EllipticParams& p);
cplx weierstrass_zeta(cplx x, const EllipticParams& p);
double eta1(const EllipticParams& p);  // zeta(omega1)
double g2(const EllipticParams& p);
// max(|p'^2 - 4(p-e1)(p-e2)(p-e3)|, |p'' - 6p^2 + g2/2|) with p'' by a
// central difference of p'.
double cubic_residual(cplx x, const EllipticParams& p);

// u = -2 (log tau)'' from the analytic log-det derivative, and the same
// value as -4 trace(bracket(A)).
cplx periodic_potential(const PeriodicSystem& sys, double x);
cplx periodic_potential_trace(const PeriodicSystem& sys, double x);
// 4 p(x) - 4 e1 - 2 (log theta_1 theta_1^*)''(x_c) for the requested x_c.
cplx periodic_potential_wp(double x, double q, double x_c);

struct PotentialConstant {
  double fitted;         // u_trace - 4 p at a sample point
  double half_period;    // -4 e1 - 2 (log theta_1 theta_1^*)''(pi/2)
  double literal_half;   // same, evaluated at 1/2
};
PotentialConstant potential_constant(double q, int N);

// trace C e^{-xA} B and its closed forms.
cplx scattering_periodic(const PeriodicSystem& sys, double x);
double scattering_full_exact(double q, double x);
cplx scattering_half_exact(double q, double x);

// ||int_x^{x+pi/2} e^{-zA} BC e^{-zA} dz - 2 e^{-xA} E e^{-xA}|| by quadrature.
double gl_identity_residual(const PeriodicSystem& sys, double x);
// Residual of Phi(x+y) + T(x,y) + 1/2 int_x^{x+pi/2} T(x,z) Phi(z+y) dz.
// Throws HypothesisFailed unless e^{-pi A/2} E e^{-pi A/2} = -E.
double periodic_gl_residual(const PeriodicSystem& sys, double x, double y);

// Lame eigenfunction
//   psi(x, a) = -s theta_1'(0) theta_1(s(x-a)) / (theta_1(sx) theta_1(sa)) e^{s x (log theta_1)'(sa)}
// with s = pi / (2 omega1); -psi'' + 2 p psi = -p(a) psi.
cplx lame_psi(cplx x, cplx a, const EllipticParams& p);
cplx lame_psi_prime(cplx x, cplx a, const EllipticParams& p);
ResidualReport lame_eigen_residual(cplx a, const EllipticParams& p, const std::vector<double>& x_grid,
                                   double h = 0.01);
// |psi(x)psi(-x) - (p(a) - p(x))|
double lame_product_residual(cplx x, cplx a, const EllipticParams& p);
// |psi(x+y) - (psi'(x)psi(y) - psi(x)psi'(y)) / (p(y) - p(x))|
double addition_rule_residual(cplx x, cplx y, cplx a, const EllipticParams& p);
// Trigonometric degeneration: psi = -sin(x-a)/(sin x sin a) e^{x cot a},
// with p replaced by cosec^2.
cplx lame_trig_psi(cplx x, cplx a);
double trig_addition_residual(cplx x, cplx y, cplx a);

// |p(x) - (cosec^2 x - 1/3)| at nome q (omega1 = pi/2).
double trig_limit_gap(double x, double q);
// |p(x) - (k^2 cosech^2(k x) + k^2/3)|, k = pi/(2W), for half-periods (omega1, iW).
double hyperbolic_limit_gap(double x, double omega1, double W);

// Travelling wave u = 4p(x - ct) + K, K = -4 c0, against
// u_xxx = 3 u u_x + u_t. Reports residuals for a given speed.
double travelling_wave_speed(const EllipticParams& p);
double travelling_wave_speed_literal(const EllipticParams& p);
ResidualReport travelling_wave_residual(const EllipticParams& p, double c,
                                        const std::vector<std::array<double, 2>>& points,
                                        double h = 0.01);

// Newton from perturbed lattice points on the half-system determinant;
// returns the largest distance from a converged zero to the lattice.
double zero_set_error(double q, int N, int max_k = 2);

struct PoleTrajectory {
  std::vector<double> t;
  std::vector<std::vector<cplx>> poles;
  std::vector<double> constraint;  // max_k |sum_{j!=k} p'(x_j - x_k)|
  ResidualReport kdv;              // |u_t - u_zzz/2 + 3 u u_z| over the z-grid
  double constraint_drift = 0.0;
};

// Poles move by dx_k/dt = 6 sum_{j!=k} p(x_j - x_k) (RK4); u(z,t) = sum 2 p(z - x_j)
// is checked against u_t = u_zzz/2 - 3 u u_z with u_t from finite differences
// of the integrated trajectory.
PoleTrajectory pole_dynamics(const std::vector<cplx>& x0, const EllipticParams& p, double t_max,
                             double dt, const std::vector<double>& z_grid);
std::vector<cplx> symmetric_poles(int m, cplx c, const EllipticParams& p);

}  // namespace taulab::elliptic
