#pragma once

#include <array>
#include <vector>

#include "taulab/airy.hpp"
#include "taulab/report.hpp"

namespace taulab::painleve {

// Hastings-McLeod branch of v'' = x v + 2 v^3 with v ~ -Ai at +infinity,
// sampled on a decreasing grid from x0 = 8. Alongside (v, v') the
// integrals I1 = int_x^{x0} v^2 and I2 = int_x^{x0} s v^2 are carried.
class PainleveSolution {
 public:
  struct State {
    double v, vp, I1, I2;
  };
  static constexpr double kX0 = 8.0;

  explicit PainleveSolution(double x_min, double step = 1.0 / 64.0, double tol = 1e-14);
  const std::vector<double>& grid() const { return x_; }
  const std::vector<State>& samples() const { return s_; }
  double x_min() const { return x_min_; }
  double alpha() const { return 0.0; }
  // Integrates from the nearest stored node to x.
  State at(double x) const;
  // |v'' - x v - 2 v^3| with v'' from a central difference of v'.
  double residual(double x, double h = 1e-2) const;

 private:
  std::vector<double> x_;
  std::vector<State> s_;
  double x_min_, tol_;
};

PainleveSolution painleve2_solve(double x_min);

// Operator-route v(x) = tr([(I + 2i mu H)^{-1} + (I - 2i mu H)^{-1}] H'),
// which satisfies v'' = x v - 8 mu^2 v^3 and v ~ -Ai at +infinity.
cplx pII_operator_route(double x, cplx mu, const airy::F2Params& p = {});
// Its x-derivative, differentiating the resolvents analytically.
cplx pII_operator_route_prime(double x, cplx mu, const airy::F2Params& p = {});

// exp(-int_x^inf (s - x) v(s)^2 ds) from a Hastings-McLeod solution.
double f2_painleve(double x, const PainleveSolution& sol);
double f2_painleve(double x);

// Right-hand side of dv/dx = -w - v^2, dw/dx = (2w - x) v - alpha.
std::array<double, 2> hamiltonian_rhs(double x, const std::array<double, 2>& vw, double alpha = 0.0);
// Integrates the canonical system from x0 to x1.
std::array<double, 2> integrate_hamiltonian(std::array<double, 2> vw, double x0, double x1,
                                            double alpha = 0.0);

struct HamiltonianReport {
  ResidualReport painleve;      // |v'' - x v - 2 v^3| along the orbit
  ResidualReport w_relation;    // |w_GL' - v^2| with w_GL = x v^2 - v'^2 + v^4
  ResidualReport tau_relation;  // |-2 (log tau)'' - v^2|, tau = exp(-1/2 int (s-x) v^2)
  ResidualReport operator_gap;  // |v_flow - v_operator| at integer x
  double seed_v = 0.0, seed_w = 0.0;
};

// Seeds (v, w) from the operator route at x_hi and integrates down to x_lo.
HamiltonianReport hamiltonian_flow_check(double x_lo = 0.0, double x_hi = 6.0);

}  // namespace taulab::painleve
