#pragma once

#include <optional>
#include <string>

#include "taulab/types.hpp"

namespace taulab {

// The state-space triple (-A, B, C) with scattering function C e^{-xA} B.
// Construction validates the Lyapunov spectrum condition and caches the
// solution R0 of A R0 + R0 A = B C.
class LinearSystem {
 public:
  static LinearSystem make(CMat A, CMat B, CMat C, bool scattering = false);
  // Skips the Lyapunov solve when R0 is already known (e.g. propagated).
  static LinearSystem with_state(CMat A, CMat B, CMat C, CMat R0, bool scattering);
  // Block-diagonal direct sum.
  static LinearSystem direct_sum(const LinearSystem& a, const LinearSystem& b);
  // Diagonal system with A = diag(lambda), B = b (column), C = c (row).
  static LinearSystem diagonal(const CVec& lambda, const CVec& b, const CVec& c,
                               bool scattering = true);

  const CMat& A() const { return A_; }
  const CMat& B() const { return B_; }
  const CMat& C() const { return C_; }
  const CMat& R0() const { return R0_; }
  Eigen::Index n() const { return A_.rows(); }
  Eigen::Index m() const { return C_.rows(); }
  bool scattering_class() const { return scattering_; }
  // min Re of the spectrum of A.
  double min_re_spectrum() const;

 private:
  LinearSystem(CMat A, CMat B, CMat C, CMat R0, bool scattering);
  CMat A_, B_, C_, R0_;
  bool scattering_;
};

// e^{-xA}; scaling and squaring with a Pade approximant.
CMat matrix_exp(const CMat& A, double x);
CMat matrix_exp(const CMat& A, cplx x);
// e^{X} for an arbitrary square matrix.
CMat expm(const CMat& X);

// min over eigenvalue pairs of |lambda_j + lambda_k| (j = k included).
double spectral_separation(const CMat& A, const CMat& A2);

// Solves A R + R A = M. Eigendecomposition fast path, Schur fallback.
CMat solve_lyapunov(const CMat& A, const CMat& M);
// Solves A1 X + X A2 = M (Bartels-Stewart on complex Schur forms).
CMat solve_sylvester(const CMat& A1, const CMat& A2, const CMat& M);
// Independent reference solver: dense Kronecker vectorization, n <= 64.
CMat solve_lyapunov_kron(const CMat& A, const CMat& M);

struct StateOperator {
  enum class Provenance { LyapunovSolved, Propagated };
  CMat R;
  double x = 0.0;
  Provenance provenance = Provenance::Propagated;
};

StateOperator resolvent_at(const LinearSystem& sys, double x);

// det(I + mu R_x).
cplx tau(const LinearSystem& sys, double x, cplx mu = 1.0);
// d/dx log det(I + mu R_x) = -mu tr((I + mu R_x)^{-1} e^{-xA} B C e^{-xA}).
cplx log_tau_d1(const LinearSystem& sys, double x, cplx mu = 1.0);
// d^2/dx^2 log det(I + mu R_x), analytic.
cplx log_tau_d2(const LinearSystem& sys, double x, cplx mu = 1.0);

// C e^{-xA} B.
CMat scattering(const LinearSystem& sys, double x);

// F_x = (I + R_x)^{-1}; throws SingularResolvent near zeros of tau.
CMat resolvent_F(const LinearSystem& sys, double x);

// C e^{-xA} F P F e^{-xA} B.
CMat bracket(const LinearSystem& sys, double x, const CMat& P);
// d/dx of bracket(P) for constant P: bracket(A(I-2F)P + P(I-2F)A).
CMat bracket_derivative(const LinearSystem& sys, double x, const CMat& P);

// u(x): -4 bracket(A) when m = 1, otherwise -2 (log tau)'' analytically.
cplx potential(const LinearSystem& sys, double x);
// -2 (log tau)'' from the analytic log-det second derivative.
cplx potential_logdet(const LinearSystem& sys, double x);
// -2 (log tau)'' by a central finite difference of log tau (cross-check).
cplx potential_fd(const LinearSystem& sys, double x, double h = 1e-3);

// Residual of A R_x + R_x A - e^{-xA} B C e^{-xA} (Frobenius norm).
double lyapunov_residual(const LinearSystem& sys, double x);

}  // namespace taulab
