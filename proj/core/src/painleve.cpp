#include "taulab/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "taulab/diff.hpp"
#include "taulab/errors.hpp"

namespace taulab::painleve {

namespace odeint = boost::numeric::odeint;

namespace {

using State4 = std::array<double, 4>;
using State2 = std::array<double, 2>;
constexpr double kBlowUpCap = 1e6;

void hm_rhs(const State4& y, State4& dy, double x) {
  dy[0] = y[1];
  dy[1] = x * y[0] + 2.0 * y[0] * y[0] * y[0];
  // I1, I2 accumulate from x0 downward, so their x-derivatives are negative.
  dy[2] = -y[0] * y[0];
  dy[3] = -x * y[0] * y[0];
}

template <class State, class Rhs>
State integrate(Rhs rhs, State y, double x0, double x1, double tol) {
  if (x0 == x1) return y;
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_cash_karp54<State>());
  const double dt = x1 > x0 ? 1e-3 : -1e-3;
  odeint::integrate_adaptive(stepper, rhs, y, x0, x1, dt);
  return y;
}

}  // namespace

PainleveSolution::PainleveSolution(double x_min, double step, double tol) : x_min_(x_min), tol_(tol) {
  if (x_min < -6.0) throw InvalidArgument("Hastings-McLeod integration is capped at x = -6");
  if (x_min >= kX0) throw InvalidArgument("x_min must be below 8");
  const auto seed = airy::airy_pair(kX0);
  State4 y{-seed.first, -seed.second, 0.0, 0.0};
  double x = kX0;
  x_.push_back(x);
  s_.push_back({y[0], y[1], y[2], y[3]});
  while (x > x_min + 1e-12) {
    const double next = std::max(x - step, x_min);
    y = integrate(hm_rhs, y, x, next, tol);
    if (!std::isfinite(y[0]) || std::fabs(y[0]) > kBlowUpCap) {
      std::ostringstream os;
      os << "Painleve II solution blew up below x = " << x;
      throw BlowUp(os.str());
    }
    x = next;
    x_.push_back(x);
    s_.push_back({y[0], y[1], y[2], y[3]});
  }
}

PainleveSolution::State PainleveSolution::at(double x) const {
  if (x < x_min_ - 1e-12 || x > kX0 + 1e-12) throw InvalidArgument("point outside the solved range");
  // nearest node on the decreasing grid
  const double step = x_.size() > 1 ? x_[0] - x_[1] : 1.0;
  auto i = static_cast<std::size_t>(std::clamp(std::lround((kX0 - x) / step), 0L, static_cast<long>(x_.size() - 1)));
  const auto& s = s_[i];
  const State4 y = integrate(hm_rhs, State4{s.v, s.vp, s.I1, s.I2}, x_[i], x, tol_);
  return {y[0], y[1], y[2], y[3]};
}

double PainleveSolution::residual(double x, double h) const {
  const double vpp = fd::derivative([&](double s) { return at(s).vp; }, x, h, 1);
  const double v = at(x).v;
  return std::fabs(vpp - x * v - 2.0 * v * v * v);
}

PainleveSolution painleve2_solve(double x_min) { return PainleveSolution(x_min); }

namespace {

struct OperatorPieces {
  CMat H, H1, H2;  // kernels Ai, Ai', Ai'' = s Ai at s + s' + x
};

OperatorPieces operator_pieces(double x, const airy::F2Params& p) {
  const auto grid = airy::f2_grid(p);
  OperatorPieces o;
  o.H = airy::airy_hankel(x, grid).M;
  o.H1 = airy::airy_hankel_prime(x, grid).M;
  o.H2 = fredholm::hankel_operator([](double s) { return cplx(s * airy::airy(s)); }, x / 2.0, grid, 1e-14, "Ai''").M;
  return o;
}

}  // namespace

cplx pII_operator_route(double x, cplx mu, const airy::F2Params& p) {
  const auto o = operator_pieces(x, p);
  const auto n = o.H.rows();
  const CMat I = CMat::Identity(n, n);
  const cplx k = 2.0 * cplx(0.0, 1.0) * mu;
  Eigen::PartialPivLU<CMat> plus(I + k * o.H), minus(I - k * o.H);
  if (plus.rcond() < 1e-13 || minus.rcond() < 1e-13) throw SingularResolvent("I +- 2i mu H is singular");
  return (plus.solve(o.H1) + minus.solve(o.H1)).trace();
}

cplx pII_operator_route_prime(double x, cplx mu, const airy::F2Params& p) {
  const auto o = operator_pieces(x, p);
  const auto n = o.H.rows();
  const CMat I = CMat::Identity(n, n);
  const cplx k = 2.0 * cplx(0.0, 1.0) * mu;
  Eigen::PartialPivLU<CMat> plus(I + k * o.H), minus(I - k * o.H);
  if (plus.rcond() < 1e-13 || minus.rcond() < 1e-13) throw SingularResolvent("I +- 2i mu H is singular");
  const CMat P1 = plus.solve(o.H1), M1 = minus.solve(o.H1);
  // d/dx (I + kH)^{-1} = -(I + kH)^{-1} k H' (I + kH)^{-1}
  return (-k * (P1 * P1) + plus.solve(o.H2) + k * (M1 * M1) + minus.solve(o.H2)).trace();
}

double f2_painleve(double x, const PainleveSolution& sol) {
  const double x0 = PainleveSolution::kX0;
  if (x >= x0) {
    // Only the Airy tail contributes beyond x0.
    const auto g = fredholm::make_panel_grid(x, x + 10.0, 10, 16);
    double t = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) t += g.weights[i] * (g.nodes[i] - x) * std::pow(airy::airy(g.nodes[i]), 2);
    return std::exp(-t);
  }
  const auto s = sol.at(x);
  // tail beyond x0 with v ~ -Ai
  const auto g = fredholm::make_panel_grid(x0, x0 + 10.0, 10, 16);
  double tail = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) tail += g.weights[i] * (g.nodes[i] - x) * std::pow(airy::airy(g.nodes[i]), 2);
  return std::exp(-(s.I2 - x * s.I1 + tail));
}

double f2_painleve(double x) {
  if (x >= PainleveSolution::kX0) return f2_painleve(x, PainleveSolution(0.0));
  return f2_painleve(x, PainleveSolution(std::max(-6.0, std::min(x, 0.0))));
}

std::array<double, 2> hamiltonian_rhs(double x, const std::array<double, 2>& vw, double alpha) {
  return {-vw[1] - vw[0] * vw[0], (2.0 * vw[1] - x) * vw[0] - alpha};
}

std::array<double, 2> integrate_hamiltonian(std::array<double, 2> vw, double x0, double x1, double alpha) {
  auto rhs = [alpha](const State2& y, State2& dy, double x) { dy = hamiltonian_rhs(x, y, alpha); };
  vw = integrate(rhs, vw, x0, x1, 1e-14);
  if (!std::isfinite(vw[0]) || std::fabs(vw[0]) > kBlowUpCap) throw BlowUp("Hamiltonian orbit blew up");
  return vw;
}

HamiltonianReport hamiltonian_flow_check(double x_lo, double x_hi) {
  if (!(x_hi > x_lo)) throw InvalidArgument("hamiltonian_flow_check needs x_lo < x_hi");
  HamiltonianReport rep;
  const cplx mu(0.0, 0.5);
  const double v0 = pII_operator_route(x_hi, mu).real();
  const double vp0 = pII_operator_route_prime(x_hi, mu).real();
  rep.seed_v = v0;
  rep.seed_w = -vp0 - v0 * v0;

  // Sample the orbit on a uniform grid (with stencil margins) carrying the
  // integrals J1 = int v^2, J2 = int s v^2 from x_hi downward.
  const double h = 1.0 / 128.0;
  const int margin = 3;
  const int count = static_cast<int>(std::lround((x_hi - x_lo) / h)) + 1 + 2 * margin;
  const double start = x_hi + margin * h;
  using S4 = std::array<double, 4>;
  auto rhs = [](const S4& y, S4& dy, double x) {
    const auto f = hamiltonian_rhs(x, {y[0], y[1]});
    dy = {f[0], f[1], -y[0] * y[0], -x * y[0] * y[0]};
  };
  S4 y{rep.seed_v, rep.seed_w, 0.0, 0.0};
  y = integrate(rhs, y, x_hi, start, 1e-14);
  std::vector<double> xs, v, w, logtau, wgl;
  double x = start;
  for (int i = 0; i < count; ++i) {
    if (i > 0) {
      const double next = start - i * h;
      y = integrate(rhs, y, x, next, 1e-14);
      x = next;
    }
    if (!std::isfinite(y[0]) || std::fabs(y[0]) > kBlowUpCap) throw BlowUp("Hamiltonian orbit blew up");
    const double vp = -y[1] - y[0] * y[0];
    xs.push_back(x);
    v.push_back(y[0]);
    w.push_back(y[1]);
    // The J integrals start at x_hi; the missing tail is linear in x and
    // drops out of the second derivative.
    logtau.push_back(-0.5 * (y[3] - x * y[2]));
    wgl.push_back(x * y[0] * y[0] - vp * vp + std::pow(y[0], 4));
  }
  const auto w1 = fd::central_weights(1, 2), w2 = fd::central_weights(2, 2);
  for (int i = margin; i < count - margin; ++i) {
    double v2 = 0, lt2 = 0, g1 = 0;
    for (int k = -2; k <= 2; ++k) {
      const auto ik = static_cast<std::size_t>(i + k);
      v2 += w2[static_cast<std::size_t>(k + 2)] * v[ik];
      lt2 += w2[static_cast<std::size_t>(k + 2)] * logtau[ik];
      g1 += w1[static_cast<std::size_t>(k + 2)] * wgl[ik];
    }
    // the grid runs in decreasing x
    v2 /= h * h;
    lt2 /= h * h;
    g1 /= -h;
    const auto iu = static_cast<std::size_t>(i);
    const double vv = v[iu];
    rep.painleve.push(xs[iu], std::fabs(v2 - xs[iu] * vv - 2.0 * vv * vv * vv));
    rep.w_relation.push(xs[iu], std::fabs(g1 - vv * vv));
    rep.tau_relation.push(xs[iu], std::fabs(-2.0 * lt2 - vv * vv));
    const double r = xs[iu] - std::round(xs[iu]);
    if (std::fabs(r) < 1e-9) rep.operator_gap.push(xs[iu], std::fabs(vv - pII_operator_route(xs[iu], mu).real()));
  }
  return rep;
}

}  // namespace taulab::painleve
