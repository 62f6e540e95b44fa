#include "taulab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "taulab/airy.hpp"
#include "taulab/diff.hpp"
#include "taulab/elliptic.hpp"
#include "taulab/errors.hpp"
#include "taulab/fredholm.hpp"
#include "taulab/painleve.hpp"
#include "taulab/scattering.hpp"
#include "taulab/soliton.hpp"

namespace taulab::acceptance {

namespace {

class Recorder {
 public:
  Recorder(CriterionResult& r, const Options& opt) : r_(r), opt_(opt) {}

  // value <= bound * tol_scale
  void at_most(const std::string& name, double value, double bound) { add(name, value, bound * opt_.tol_scale, true, true); }
  // value <= bound, unaffected by tol_scale (runtimes, exact structural bounds)
  void at_most_fixed(const std::string& name, double value, double bound) { add(name, value, bound, true, true); }
  void at_least(const std::string& name, double value, double bound) { add(name, value, bound, false, true); }
  void info(const std::string& name, double value) {
    Measurement m;
    m.name = name;
    m.value = value;
    m.bound = std::numeric_limits<double>::quiet_NaN();
    m.gating = false;
    m.pass = true;
    r_.measurements.push_back(m);
  }

 private:
  void add(const std::string& name, double value, double bound, bool upper, bool gating) {
    Measurement m;
    m.name = name;
    m.value = value;
    m.bound = bound;
    m.upper = upper;
    m.gating = gating;
    m.pass = std::isfinite(value) && (upper ? value <= bound : value >= bound);
    r_.measurements.push_back(m);
  }

  CriterionResult& r_;
  const Options& opt_;
};

double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

std::vector<double> range(double a, double b, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = count == 1 ? a : a + (b - a) * i / (count - 1);
  return v;
}

double rel_gap(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<LinearSystem> test_systems(std::mt19937_64& rng) {
  return {one_soliton(), multi_soliton({1.0, 1.7}), three_soliton(), random_scattering_system(rng, 4, 2),
          jordan_system()};
}

// 1
void determinant_identity(Recorder& rec, const Options& opt) {
  std::mt19937_64 rng(opt.seed);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto sys = random_scattering_system(rng, 1 + k % 8);
    const fredholm::ScalarSymbol phi = [&](double s) { return scattering(sys, s)(0, 0); };
    for (double x : {0.25, 0.5, 1.0, 2.0}) {
      const auto K = fredholm::hankel_operator(phi, x, fredholm::grid_for_system(sys, x));
      worst = std::max(worst, rel_gap(fredholm::fredholm_det(K, 1.0), tau(sys, x)));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  rec.at_most("max relative gap det(I+R) vs Nystrom", worst, 1e-6);
  rec.at_most_fixed("runtime seconds", secs, 10.0);
}

// 2
void soliton_expansion(Recorder& rec, const Options& opt) {
  std::mt19937_64 rng(opt.seed + 2);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto sys = random_diagonal_system(rng, 1 + k % 8);
    for (cplx mu : {cplx(1.0), cplx(-0.5), cplx(0.0, 1.0)})
      for (double x : {0.0, 0.4}) worst = std::max(worst, soliton::soliton_expansion_gap(sys, x, mu));
  }
  rec.at_most("max relative gap subset expansion vs det", worst, 1e-10);
}

// 3
void cauchy(Recorder& rec, const Options& opt) {
  std::mt19937_64 rng(opt.seed + 3);
  auto disk = [&] {
    const double r = std::sqrt(uniform(rng, 0.0, 1.0)), t = uniform(rng, 0.0, 2.0 * kPi);
    return std::polar(r, t);
  };
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = 1 + k % 6;
    CVec x(n), y(n);
    for (int j = 0; j < n; ++j) {
      x(j) = disk();
      y(j) = disk();
    }
    worst = std::max(worst, rel_gap(soliton::cauchy_det(x, y), soliton::cauchy_det_direct(x, y)));
  }
  rec.at_most("max relative error closed form vs direct", worst, 1e-11);
}

// 4
void gelfand_levitan(Recorder& rec, const Options& opt) {
  std::mt19937_64 rng(opt.seed + 4);
  const char* names[] = {"one-soliton", "two-soliton", "three-soliton", "random 2x2 matrix", "jordan block"};
  const auto systems = test_systems(rng);
  for (std::size_t s = 0; s < systems.size(); ++s) {
    const auto T = inverse::gl_kernel(systems[s], 1.0);
    double worst = 0.0;
    for (double x : range(0.0, 2.0, 5))
      for (double d : range(0.0, 2.0, 5)) worst = std::max(worst, inverse::gl_residual(T, x, x + d));
    rec.at_most(std::string("GL residual, ") + names[s], worst, 1e-7);
  }
}

// 5
void trace_identity(Recorder& rec, const Options& opt) {
  std::mt19937_64 rng(opt.seed + 5);
  auto systems = test_systems(rng);
  for (int k = 0; k < 5; ++k) systems.push_back(random_scattering_system(rng, 2 + k, 1));
  double worst = 0.0;
  for (const auto& sys : systems)
    for (double x : {0.0, 0.5, 1.0, 2.0})
      for (cplx mu : {cplx(1.0), cplx(0.5, 0.5)}) worst = std::max(worst, inverse::trace_identity_residual(sys, mu, x));
  rec.at_most("max |mu tr T(x,x) - (log tau)'|", worst, 1e-9);
}

// 6
void miura(Recorder& rec, const Options&) {
  const std::vector<LinearSystem> systems = {one_soliton(), multi_soliton({0.8, 1.9}), three_soliton()};
  double constraint = 0.0, miura_gap = 0.0, routes = 0.0;
  for (const auto& sys : systems) {
    const auto mp = inverse::miura_pair(sys, 0.5);
    for (double x : range(0.5, 3.0, 11)) {
      constraint = std::max(constraint, mp.constraint_residual(x));
      miura_gap = std::max(miura_gap, mp.miura_residual(x));
      routes = std::max(routes, mp.route_gap(x));
    }
  }
  rec.at_most("max |w'/(2 mu) + v^2|", constraint, 1e-8);
  rec.info("max |v' + v^2 - u(-mu)|", miura_gap);
  rec.info("max operator vs log-det route gap", routes);
}

// 7
void kdv(Recorder& rec, const Options&) {
  const std::vector<std::pair<const char*, LinearSystem>> systems = {
      {"1-soliton", one_soliton()}, {"2-soliton", multi_soliton({1.0, 1.5})}, {"3-soliton", three_soliton()}};
  std::vector<std::array<double, 2>> pts;
  for (double x : range(-2.0, 2.0, 5))
    for (double t : {0.0, 0.05}) pts.push_back({x, t});
  // Eighth-order stencils at h = 0.01 in x. In t the field moves at rate
  // 2 lambda^3 (54 for lambda = 3), so t gets the step h / lambda_max^2.
  for (const auto& [name, sys] : systems) {
    const soliton::EvolvedSystem ev(sys, 0.0);
    const double lmax = sys.A().diagonal().cwiseAbs().maxCoeff();
    const auto r = soliton::kdv_residual(ev, pts, 0.01, soliton::KdvForm::Normalized, 8, 1.0 / (lmax * lmax));
    rec.at_most(std::string("KdV residual ") + name, r.max, 1e-5);
    // Order is read off second-order stencils at steps coarse enough that
    // truncation, not rounding, dominates.
    const auto coarse = soliton::kdv_residual(ev, pts, 0.04, soliton::KdvForm::Normalized, 2, 1.0 / (lmax * lmax));
    rec.at_least(std::string("KdV order ") + name, coarse.order_estimate, 1.9);
  }
  // Fifth derivatives amplify rounding by h^-5, so the fifth-order flow is
  // checked on fields with moderate spectra.
  const std::vector<std::pair<const char*, LinearSystem>> slow = {
      {"1-soliton", one_soliton()}, {"2-soliton", multi_soliton({0.6, 1.0})}, {"3-soliton", multi_soliton({0.5, 0.8, 1.1})}};
  for (const auto& [name, sys] : slow) {
    const auto r5 = soliton::kdv5_residual(soliton::EvolvedSystem(sys, 0.0), pts, 0.02, 6);
    rec.at_most(std::string("KdV5 residual ") + name, r5.max, 1e-4);
  }
}

// 8
void kp(Recorder& rec, const Options& opt) {
  std::mt19937_64 rng(opt.seed + 8);
  const auto sys = multi_soliton({0.6, 0.9, 1.3, 1.7});
  std::vector<std::array<double, 3>> pts;
  for (double x : {-0.5, 0.0, 0.7})
    for (double y : {0.0, 0.3}) pts.push_back({x, y, 0.1});
  for (int n : {2, 3}) {
    const soliton::Tau3 t = [&](double x, double y, double s) { return soliton::kp_tau(sys, n, x, y, s).tau; };
    // tau carries rounding of order 1e-13 from determinant cancellation,
    // which a fourth x-derivative at small steps amplifies; a coarse
    // eighth-order stencil balances the two.
    const auto r = soliton::hirota_residual(t, pts, 0.04, 8);
    rec.at_most("Hirota residual n=" + std::to_string(n), r.max, 1e-4);
  }
  const auto a = random_diagonal_system(rng, 3), b = random_diagonal_system(rng, 3);
  const soliton::KPParams p{1.0, 1.0, 0.3};
  std::vector<std::array<double, 4>> p4;
  for (double x : {0.0, 0.5})
    for (double z : {0.2, 0.8}) p4.push_back({x, z, 0.1, 0.05});
  const auto ks = soliton::kp_scattering_residual(a, b, p, p4, 0.01);
  rec.at_most("linear KP residual (t equation)", ks.linear_t.max, 1e-6);
  rec.at_most("linear KP residual (y equation)", ks.linear_y.max, 1e-6);
  rec.info("Sylvester derivative residual", ks.sylvester.max);
  const auto same = soliton::kp_scattering_residual(a, a, p, p4, 0.01);
  rec.info("reduction det(I+S) vs tau", same.reduction.max);
}

// 9
void toda(Recorder& rec, const Options& opt) {
  std::mt19937_64 rng(opt.seed + 9);
  double worst = 0.0;
  for (int k = 0; k < 5; ++k) {
    const auto sys = random_scattering_system(rng, 6, 1);
    for (int N : {2, 3, 4})
      for (double x : {0.0, 0.5}) worst = std::max(worst, soliton::toda_residual(sys.A(), sys.B(), sys.C(), N, x).max);
  }
  rec.at_most("max Toda residual, N<=4", worst, 1e-6);
}

// 10
void baker_akhiezer(Recorder& rec, const Options&) {
  const auto grid = range(-2.0, 2.0, 9);
  const std::vector<cplx> lambdas = {cplx(0.5, 0.5), cplx(0.0, 1.5), cplx(2.5, 0.0)};
  double one = 0.0, three = 0.0, tail = 0.0;
  for (const cplx& l : lambdas) {
    one = std::max(one, inverse::schrodinger_residual(one_soliton(), l, grid, 0.01).max);
    three = std::max(three, inverse::schrodinger_residual(three_soliton(), l, grid, 0.01).max);
    for (const auto& sys : {one_soliton(), three_soliton()}) {
      const double x = 25.0;
      tail = std::max(tail, std::abs(inverse::baker_akhiezer(sys, x, l) * std::exp(-l * x) - 1.0));
    }
  }
  rec.at_most("Schrodinger residual 1-soliton", one, 1e-6);
  rec.at_most("Schrodinger residual 3-soliton", three, 1e-5);
  rec.at_most("|psi e^{-lambda x} - 1| at x=25", tail, 1e-8);
}

// 11
void airy_suite(Recorder& rec, const Options&) {
  rec.at_most("|Ai(0) - 0.3550280539|", std::abs(airy::airy(0.0) - 0.3550280539), 1e-9);
  const auto grid = airy::default_product_grid();
  double worst = 0.0;
  for (double x : {-2.0, 0.0, 1.5}) worst = std::max(worst, airy::airy_factorization_residual(x, grid));
  rec.at_most("max |K - Gamma^2|", worst, 1e-8);
}

// 12
void tracy_widom(Recorder& rec, const Options&) {
  const painleve::PainleveSolution sol(-6.0);
  double gap = 0.0, drop = 0.0, prev = -1.0;
  for (double x : range(-6.0, 4.0, 41)) {
    const double d = airy::f2_determinant(x);
    gap = std::max(gap, std::abs(d - painleve::f2_painleve(x, sol)));
    if (prev >= 0.0) drop = std::max(drop, prev - d);
    prev = d;
  }
  rec.at_most("max |F2 det - F2 Painleve| on [-6,4]", gap, 1e-5);
  rec.at_most_fixed("largest decrease of F2 (monotone)", drop, 0.0);
  rec.at_most("|F2(8) - 1|", std::abs(airy::f2_determinant(8.0) - 1.0), 1e-9);
  double sum_gap = 0.0, e0_gap = 0.0;
  for (double x : {-3.0, -1.5, 0.0}) {
    const auto E = fredholm::gap_probabilities(airy::airy_kernel_operator(x), 20);
    double s = 0.0;
    for (double e : E) s += e;
    sum_gap = std::max(sum_gap, std::abs(s - 1.0));
    e0_gap = std::max(e0_gap, std::abs(E[0] - airy::f2_determinant(x)));
  }
  rec.at_most("|sum E(n) - 1|", sum_gap, 1e-8);
  rec.at_most("|E(0) - F2|", e0_gap, 1e-8);
}

// 13
void painleve_suite(Recorder& rec, const Options&) {
  const double h = 0.02;
  for (cplx mu : {cplx(0.0, 0.5), cplx(0.3, 0.0)}) {
    double worst = 0.0;
    for (double x : range(-1.0, 3.0, 9)) {
      auto v = [&](double s) { return painleve::pII_operator_route(s, mu); };
      const cplx vx = v(x);
      const cplx r = fd::derivative(v, x, h, 2) - x * vx + 8.0 * mu * mu * vx * vx * vx;
      worst = std::max(worst, std::abs(r));
    }
    std::ostringstream name;
    name << "operator-route PII residual, mu=" << mu.real() << (mu.imag() >= 0 ? "+" : "") << mu.imag() << "i";
    rec.at_most(name.str(), worst, 1e-6);
  }
  const auto hr = painleve::hamiltonian_flow_check(0.0, 6.0);
  rec.at_most("Hamiltonian flow PII residual", hr.painleve.max, 1e-7);
  rec.info("Hamiltonian w relation", hr.w_relation.max);
  rec.info("Hamiltonian tau relation", hr.tau_relation.max);
  rec.info("Hamiltonian flow vs operator route", hr.operator_gap.max);
}

// 14
void theta_realization(Recorder& rec, const Options&) {
  const auto grid = range(0.1, kPi - 0.1, 20);
  for (double q : {0.1, 0.3, 0.5}) {
    const auto sys = elliptic::build_theta_system(q, 40);
    double worst = 0.0;
    for (double x : grid)
      worst = std::max(worst, std::abs(elliptic::tau_periodic(sys, x) - elliptic::theta_product_expression(x, q)));
    std::ostringstream tag;
    tag << "q=" << q;
    rec.at_most("det vs theta product, " + tag.str(), worst, 1e-9);
    rec.at_most("zero set vs lattice, " + tag.str(), elliptic::zero_set_error(q, 40), 1e-8);
    rec.info("tail bound q^{2N}, " + tag.str(), sys.tail_trace());
  }
}

// 15
void elliptic_suite(Recorder& rec, const Options&) {
  const auto p = elliptic::EllipticParams::from_nome(0.1);
  const auto pg = elliptic::EllipticParams::from_periods(1.3, 0.9);
  double cubic = 0.0;
  for (const cplx& x : {cplx(0.7), cplx(1.2, 0.3), cplx(0.4, -0.2)})
    cubic = std::max({cubic, elliptic::cubic_residual(x, p), elliptic::cubic_residual(x, pg)});
  rec.at_most("p cubic residual", cubic, 1e-8);

  const cplx a(0.4, 0.3);
  const auto lame = elliptic::lame_eigen_residual(a, p, range(0.5, 2.5, 9), 0.01);
  rec.at_most("Lame eigen-residual", lame.max, 1e-6);
  double prod = 0.0;
  for (double x : range(0.3, 2.8, 6)) prod = std::max(prod, elliptic::lame_product_residual(x, a, p));
  rec.at_most("Lame product identity", prod, 1e-8);

  std::vector<std::array<double, 2>> pts, at_zero;
  for (double x : range(1.0, 2.5, 7)) {
    pts.push_back({x, 0.0});
    pts.push_back({x, 0.1});
    at_zero.push_back({x, 0.0});
  }
  const double c = elliptic::travelling_wave_speed(p);
  rec.at_most("travelling-wave residual", elliptic::travelling_wave_residual(p, c, pts, 0.005).max, 1e-5);
  const double c_lit = elliptic::travelling_wave_speed_literal(p);
  rec.info("speed as printed", c_lit);
  rec.info("travelling-wave residual at t=0, speed as printed",
           elliptic::travelling_wave_residual(p, c_lit, at_zero, 0.01).max);

  const auto x0 = elliptic::symmetric_poles(3, cplx(0.3, 0.6), p);
  const auto tr = elliptic::pole_dynamics(x0, p, 0.01, 1e-4, range(0.1, 2.5, 4));
  rec.at_most("pole constraint drift, m=3", tr.constraint_drift, 1e-6);
  rec.info("pole-field KdV residual", tr.kdv.max);
}

// 16
void bracket_calculus(Recorder& rec, const Options& opt) {
  std::mt19937_64 rng(opt.seed + 16);
  double product = 0.0, u_gap = 0.0, order = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const auto sys = random_scattering_system(rng, 3 + k, 1);
    const auto n = sys.n();
    const CMat& A = sys.A();
    CMat P(n, n), Q(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        P(i, j) = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
        Q(i, j) = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
      }
    const double x = 0.3;
    const CMat F = resolvent_F(sys, x);
    const cplx lhs = bracket(sys, x, P)(0, 0) * bracket(sys, x, Q)(0, 0);
    const cplx rhs = bracket(sys, x, P * (A * F + F * A - 2.0 * F * A * F) * Q)(0, 0);
    product = std::max(product, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));

    const cplx exact = bracket_derivative(sys, x, P)(0, 0);
    auto b = [&](double s) { return bracket(sys, s, P)(0, 0); };
    const double e1 = std::abs(fd::derivative(b, x, 0.02, 1, 2) - exact);
    const double e2 = std::abs(fd::derivative(b, x, 0.01, 1, 2) - exact);
    order = std::min(order, convergence_order(e1, e2));
    for (double s : {0.0, 0.5, 1.0}) u_gap = std::max(u_gap, std::abs(-4.0 * bracket(sys, s, A)(0, 0) - potential_fd(sys, s)));
  }
  rec.at_most("product rule (relative)", product, 1e-12);
  rec.at_least("derivative rule FD order", order, 1.9);
  rec.at_most("|-4 bracket(A) - FD of -2 (log tau)''|", u_gap, 1e-6);

  double lenard = 0.0, literal = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto sys = random_diagonal_system(rng, 2 + k);
    const CMat& A = sys.A();
    for (int m : {0, 1}) {
      CMat Am = A;
      for (int i = 0; i < 2 * m; ++i) Am = Am * A;
      const CMat Am2 = Am * A * A;
      for (double x : {0.2, 0.8}) {
        auto d = [&](const CMat& M, double s) { return bracket_derivative(sys, s, M)(0, 0); };
        const cplx bA = bracket(sys, x, A)(0, 0), bAm = bracket(sys, x, Am)(0, 0);
        const cplx dA = d(A, x), dAm = d(Am, x), dAm2 = d(Am2, x);
        const cplx d3Am = fd::derivative([&](double s) { return d(Am, s); }, x, 0.01, 2, 8);
        const cplx d3A = fd::derivative([&](double s) { return d(A, s); }, x, 0.01, 2, 8);
        lenard = std::max(lenard, std::abs(4.0 * dAm2 - d3Am - 8.0 * dA * bAm - 16.0 * bA * dAm));
        literal = std::max(literal, std::abs(4.0 * dAm2 - d3A - 8.0 * dA * bAm - 16.0 * bAm * dA));
      }
    }
  }
  rec.at_most("commutative identity, m=0,1", lenard, 1e-8);
  rec.info("commutative identity as printed (exact only at m=0)", literal);
}

using Suite = std::function<void(Recorder&, const Options&)>;

const std::vector<Suite>& suites() {
  static const std::vector<Suite> s = {determinant_identity, soliton_expansion, cauchy, gelfand_levitan,
                                       trace_identity, miura, kdv, kp, toda, baker_akhiezer, airy_suite,
                                       tracy_widom, painleve_suite, theta_realization, elliptic_suite,
                                       bracket_calculus};
  return s;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> c = {
      {1, "determinant-identity", "det(I+R_x) equals the Nystrom Fredholm determinant"},
      {2, "soliton-expansion", "subset expansion of det(I+mu R_x)"},
      {3, "cauchy", "Cauchy determinant closed form"},
      {4, "gelfand-levitan", "Gelfand-Levitan equation"},
      {5, "trace-identity", "trace identity for the Gelfand-Levitan kernel"},
      {6, "miura", "Miura pair constraint"},
      {7, "kdv", "KdV and fifth-order KdV residuals"},
      {8, "kp", "KP Hirota equation and linear KP scattering"},
      {9, "toda", "Toda equation for Hankel minors"},
      {10, "baker-akhiezer", "Baker-Akhiezer eigenfunction"},
      {11, "airy", "Airy function and Airy kernel factorization"},
      {12, "tracy-widom", "Tracy-Widom distribution by two routes"},
      {13, "painleve", "Painleve II from operators and Hamiltonian flow"},
      {14, "theta", "theta-realizing periodic system"},
      {15, "elliptic", "Weierstrass, Lame, travelling wave and pole dynamics"},
      {16, "bracket", "bracket calculus"},
  };
  return c;
}

bool selected(const CriterionInfo& c, const std::vector<std::string>& only) {
  if (only.empty()) return true;
  for (const auto& tok : only) {
    if (tok == std::to_string(c.id)) return true;
    if (!tok.empty() && std::string(c.key).find(tok) != std::string::npos) return true;
  }
  return false;
}

CriterionResult run_criterion(int id, const Options& opt) {
  if (!(opt.tol_scale > 0.0)) throw InvalidArgument("tolerance scale must be positive");
  const auto& all = criteria();
  if (id < 1 || id > static_cast<int>(all.size())) throw InvalidArgument("no criterion " + std::to_string(id));
  const auto& info = all[static_cast<std::size_t>(id - 1)];
  CriterionResult r;
  r.id = id;
  r.key = info.key;
  r.title = info.title;
  Recorder rec(r, opt);
  const auto start = std::chrono::steady_clock::now();
  try {
    suites()[static_cast<std::size_t>(id - 1)](rec, opt);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.pass = r.error.empty() && !r.measurements.empty() &&
           std::all_of(r.measurements.begin(), r.measurements.end(), [](const Measurement& m) { return m.pass; });
  return r;
}

std::vector<CriterionResult> run_all(const Options& opt) {
  if (!(opt.tol_scale > 0.0)) throw InvalidArgument("tolerance scale must be positive");
  std::vector<CriterionResult> out;
  for (const auto& c : criteria())
    if (selected(c, opt.only)) out.push_back(run_criterion(c.id, opt));
  return out;
}

std::string to_json(const std::vector<CriterionResult>& results, const Options& opt) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j;
  j["schema"] = "taulab.report";
  j["schema_version"] = kSchemaVersion;
  j["seed"] = opt.seed;
  j["tol_scale"] = opt.tol_scale;
  j["only"] = opt.only;
  bool all = true;
  json arr = json::array();
  for (const auto& r : results) {
    all = all && r.pass;
    json c;
    c["id"] = r.id;
    c["key"] = r.key;
    c["title"] = r.title;
    c["pass"] = r.pass;
    c["seconds"] = r.seconds;
    if (!r.error.empty()) c["error"] = r.error;
    json ms = json::array();
    for (const auto& m : r.measurements) {
      json mj;
      mj["name"] = m.name;
      mj["value"] = num(m.value);
      mj["bound"] = num(m.bound);
      mj["kind"] = !m.gating ? "info" : (m.upper ? "max" : "min");
      mj["pass"] = m.pass;
      ms.push_back(mj);
    }
    c["measurements"] = ms;
    arr.push_back(c);
  }
  j["pass"] = all;
  j["criteria"] = arr;
  return j.dump(2);
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << r.id << "  " << std::left << std::setw(22)
     << r.key << std::right;
  if (!r.error.empty()) {
    os << "  error: " << r.error;
  } else {
    // worst gating measurement, as value/bound
    const Measurement* worst = nullptr;
    double ratio = -1.0;
    for (const auto& m : r.measurements) {
      if (!m.gating) continue;
      const double q = m.upper ? (m.bound > 0 ? m.value / m.bound : (m.value > 0 ? 1e300 : 0.0))
                               : (m.value > 0 ? m.bound / m.value : 1e300);
      if (!m.pass) {
        worst = &m;
        break;
      }
      if (q > ratio) {
        ratio = q;
        worst = &m;
      }
    }
    if (worst)
      os << "  " << worst->name << " = " << std::setprecision(3) << std::scientific << worst->value
         << (worst->upper ? " <= " : " >= ") << worst->bound;
  }
  os << std::fixed << std::setprecision(2) << "  (" << r.seconds << " s)";
  return os.str();
}

LinearSystem one_soliton(double lambda, double c) {
  CVec l(1), b(1), cc(1);
  l << lambda;
  b << 1.0;
  cc << c;
  return LinearSystem::diagonal(l, b, cc);
}

LinearSystem multi_soliton(const std::vector<double>& lambdas) {
  const auto n = static_cast<Eigen::Index>(lambdas.size());
  if (n == 0) throw InvalidArgument("need at least one soliton parameter");
  CVec l(n), b(n), c(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lj = lambdas[static_cast<std::size_t>(j)];
    if (!(lj > 0.0)) throw InvalidArgument("soliton parameters must be positive");
    for (Eigen::Index k = 0; k < j; ++k)
      if (lambdas[static_cast<std::size_t>(k)] == lj) throw InvalidArgument("soliton parameters must be distinct");
    l(j) = lj;
    b(j) = 1.0;
    c(j) = 2.0 * lj;
  }
  return LinearSystem::diagonal(l, b, c);
}

LinearSystem three_soliton() { return multi_soliton({1.0, 2.0, 3.0}); }

LinearSystem jordan_system() {
  CMat A = CMat::Identity(5, 5);
  for (int i = 0; i < 4; ++i) A(i, i + 1) = 1.0;
  CMat B = CMat::Zero(5, 1);
  B(4, 0) = 1.0;
  CMat C = CMat::Zero(1, 5);
  C(0, 0) = 24.0;
  return LinearSystem::make(A, B, C, true);
}

LinearSystem random_scattering_system(std::mt19937_64& rng, int n, int m) {
  if (n < 1 || m < 1) throw InvalidArgument("random system needs n, m >= 1");
  CMat S = CMat::Identity(n, n), D = CMat::Zero(n, n), B(n, m), C(m, n);
  for (int i = 0; i < n; ++i) {
    D(i, i) = cplx(uniform(rng, 0.5, 2.5), uniform(rng, -0.5, 0.5));
    for (int j = 0; j < n; ++j) S(i, j) += 0.3 * cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
    for (int k = 0; k < m; ++k) {
      B(i, k) = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
      C(k, i) = cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
    }
  }
  const CMat A = S * D * S.inverse();
  return LinearSystem::make(A, B, C, true);
}

LinearSystem random_diagonal_system(std::mt19937_64& rng, int n) {
  if (n < 1) throw InvalidArgument("random system needs n >= 1");
  CVec l(n), b(n), c(n);
  // well-separated positive spectrum
  double at = uniform(rng, 0.3, 0.6);
  for (int j = 0; j < n; ++j) {
    l(j) = at;
    at += uniform(rng, 0.15, 0.5);
    b(j) = uniform(rng, 0.3, 1.2);
    c(j) = uniform(rng, 0.3, 1.2);
  }
  return LinearSystem::diagonal(l, b, c);
}

}  // namespace taulab::acceptance
