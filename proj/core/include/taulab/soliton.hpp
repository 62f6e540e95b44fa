#pragma once

#include <array>
#include <functional>
#include <vector>

#include "taulab/linsys.hpp"
#include "taulab/report.hpp"

namespace taulab::soliton {

// (-A, B, C) with B replaced by e^{-2 t3 A^3 - 2 t5 A^5} B. The state
// operator is propagated rather than re-solved, since the flow commutes
// with A.
class EvolvedSystem {
 public:
  EvolvedSystem(LinearSystem base, double t3, double t5 = 0.0);
  const LinearSystem& base() const { return base_; }
  double t3() const { return t3_; }
  double t5() const { return t5_; }
  const LinearSystem& system() const { return current_; }
  EvolvedSystem advanced(double dt3, double dt5 = 0.0) const;

 private:
  LinearSystem base_;
  double t3_, t5_;
  LinearSystem current_;
};

EvolvedSystem evolve(const LinearSystem& sys, double t3, double t5 = 0.0);

enum class Flow { T3, T5 };

// u(x, t) sampled on a uniform rectangle; values(i, j) = u(x_i, t_j).
struct GridFunction2D {
  std::vector<double> x_grid, t_grid;
  RMat values;
};

std::vector<double> uniform_grid(double a, double b, double step);

// u = -4 bracket(A), with t measured along `flow` from the evolved state.
GridFunction2D kdv_field(const EvolvedSystem& sys, const std::vector<double>& x_grid,
                         const std::vector<double>& t_grid, Flow flow = Flow::T3);
cplx kdv_value(const EvolvedSystem& sys, double x, double t, Flow flow = Flow::T3);

// Which constant convention the KdV residual is evaluated in.
//  Normalized: 4U_t = U_xxx + 12 U U_x on U = -u/2 (the tau-function form).
//  Literal:    the same equation applied to u itself (expected to fail).
//  Textbook:   4u_t = u_xxx - 6 u u_x, the rescaled textbook form.
enum class KdvForm { Normalized, Literal, Textbook };

// Residual on a sampled field, interior points only.
ResidualReport kdv_residual(const GridFunction2D& u, KdvForm form = KdvForm::Normalized);
// Residual at sample points (x, t) from the exact field with step h, plus
// the empirical order from steps 2h and h. The t-step is h * t_ratio; fast
// solitons move at speed lambda^2, so t usually wants a finer step than x.
ResidualReport kdv_residual(const EvolvedSystem& sys,
                            const std::vector<std::array<double, 2>>& points, double h,
                            KdvForm form = KdvForm::Normalized, int accuracy = 4,
                            double t_ratio = 1.0);

// 16 w_t5 = w_5x + 10 w w_3x + 20 w_x w_2x + 30 w^2 w_x on w = -u.
ResidualReport kdv5_residual(const EvolvedSystem& sys,
                             const std::vector<std::array<double, 2>>& points, double h,
                             int accuracy = 4);

// det[1/(1 - x_r y_s)] in closed form and directly.
cplx cauchy_det(const CVec& x, const CVec& y);
cplx cauchy_det_direct(const CVec& x, const CVec& y);

// Subset expansion of det(I + mu R_x) for diagonal A.
cplx soliton_expansion(const LinearSystem& sys, double x, cplx mu = 1.0);
// Relative gap between the expansion and tau().
double soliton_expansion_gap(const LinearSystem& sys, double x, cplx mu = 1.0);

// tau_n(x) = det[C e^{-xV} V^{j+k-2} B]_{j,k=1..n}, tau_0 = 1.
cplx toda_tau(const CMat& V, const CMat& B, const CMat& C, int n, double x);
// (log tau_n)'' - tau_{n+1} tau_{n-1} / tau_n^2 for 1 <= n < N; grid holds n.
ResidualReport toda_residual(const CMat& V, const CMat& B, const CMat& C, int N, double x);

struct KPTau {
  cplx tau;
  cplx u;  // -2 d^2/dx^2 log tau
};

// Wronskian tau det[C e^{yA^2 - tA^3} A^{j+k-2} e^{-xA} B].
KPTau kp_tau(const LinearSystem& sys, int n, double x, double y, double t);

using Tau3 = std::function<cplx(double, double, double)>;
// Seven-term Hirota bilinear KP expression divided by tau^2.
ResidualReport hirota_residual(const Tau3& tau, const std::vector<std::array<double, 3>>& points,
                               double h, int accuracy = 4);

struct KPParams {
  double alpha = 1.0, beta = 1.0, lambda = 0.0;
};

struct KPScatteringReport {
  ResidualReport linear_t;    // alpha Psi_t + Psi_xxx + Psi_zzz + lambda (Psi_x + Psi_z)
  ResidualReport linear_y;    // beta Psi_y + Psi_xx - Psi_zz
  ResidualReport sylvester;   // dS/dx + A2 S + S A1 by finite differences
  ResidualReport reduction;   // A1 = A2 only: det(I + S_x) vs the Hankel tau
};

// Psi(x, z; y; t) = C(y;t) e^{-xA1} e^{-zA2} B(y;t).
cplx kp_psi(const CMat& A1, const CMat& A2, const CMat& B, const CMat& C, const KPParams& p,
            double x, double z, double y, double t);
// S_x solving A2 S + S A1 = e^{-xA2} B(y;t) C(y;t) e^{-xA1}.
CMat kp_state(const CMat& A1, const CMat& A2, const CMat& B, const CMat& C, const KPParams& p,
              double x, double y, double t);
// Points are (x, z, y, t). B and C come from sysB and sysA respectively.
KPScatteringReport kp_scattering_residual(const LinearSystem& sysA, const LinearSystem& sysB,
                                          const KPParams& p,
                                          const std::vector<std::array<double, 4>>& points,
                                          double h = 0.01);

}  // namespace taulab::soliton
