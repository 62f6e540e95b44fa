#pragma once

#include <vector>

#include "taulab/fredholm.hpp"
#include "taulab/linsys.hpp"
#include "taulab/report.hpp"

namespace taulab::inverse {

// T_mu(x, y) = -C e^{-xA} (I + mu R_x)^{-1} e^{-yA} B.
class GLKernel {
 public:
  GLKernel(LinearSystem sys, cplx mu);
  CMat operator()(double x, double y) const;
  const LinearSystem& system() const { return sys_; }
  cplx mu() const { return mu_; }

 private:
  LinearSystem sys_;
  cplx mu_;
};

GLKernel gl_kernel(const LinearSystem& sys, cplx mu);

// Quadrature grid on (0, L) used for integrals over (x, x + L); L is chosen
// so that e^{-2 L min Re(lambda)} is negligible.
fredholm::HalfLineGrid gl_tail_grid(const LinearSystem& sys);

// |T(x,y) + Phi(x+y) + mu int_x^inf T(x,z) Phi(z+y) dz| (max entry).
double gl_residual(const GLKernel& T, double x, double y, const fredholm::HalfLineGrid& grid);
double gl_residual(const GLKernel& T, double x, double y);

// |mu tr T_mu(x,x) - d/dx log det(I + mu R_x)|.
double trace_identity_residual(const LinearSystem& sys, cplx mu, double x);

// Off-diagonal (v) and diagonal (w) traces of the Miura pair, each computed
// from the operator formulas and from log-determinant derivatives.
struct MiuraSample {
  cplx v_op, w_op, dv_op, dw_op;
  cplx v_logdet, w_logdet, dv_logdet, dw_logdet;
};

class MiuraPair {
 public:
  MiuraPair(LinearSystem sys, cplx mu);
  MiuraSample at(double x) const;
  // |(1/2mu) w' + v^2| from the operator formulas.
  double constraint_residual(double x) const;
  // |v' + v^2 + 2 (log det(I - mu R_x))''|; meaningful for mu = 1/2.
  double miura_residual(double x) const;
  // Largest disagreement between the operator and log-det routes.
  double route_gap(double x) const;
  cplx mu() const { return mu_; }
  const LinearSystem& system() const { return sys_; }

 private:
  LinearSystem sys_;
  cplx mu_;
};

MiuraPair miura_pair(const LinearSystem& sys, cplx mu);

// e^{lambda x} det(I + R_x (lambda + A)(lambda - A)^{-1}) / det(I + R_x).
cplx baker_akhiezer(const LinearSystem& sys, double x, cplx lambda);

// max |-psi'' + u psi + lambda^2 psi| / max |psi| over the grid, psi'' by a
// central stencil of step h. order_estimate compares h and h/2.
ResidualReport schrodinger_residual(const LinearSystem& sys, cplx lambda,
                                    const std::vector<double>& x_grid, double h = 0.01);

// Eigenvalue-product form of det(I + mu G)/det(I - mu G) for a discretized kernel.
cplx blaschke_ratio(const fredholm::DiscretizedKernel& K, cplx mu);

}  // namespace taulab::inverse
