#include "taulab/airy.hpp"

#include <cmath>
#include <mutex>
#include <sstream>

#include "taulab/errors.hpp"

namespace taulab::airy {

namespace {

using LD = long double;

constexpr LD kAi0 = 0.355028053887817239260063186004183176L;
constexpr LD kAip0 = -0.258819403792806798405183560189203963L;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kCross = 8.0;

std::pair<double, double> maclaurin(double xd) {
  const LD x = xd, x3 = x * x * x;
  // f = sum 3^k (1/3)_k x^{3k}/(3k)!, g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
  LD f = 1, g = x, fp = 0, gp = 1;
  LD tf = 1, tg = x;
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3 * k - 1) * static_cast<LD>(3 * k));
    tg *= x3 / ((3 * k) * static_cast<LD>(3 * k + 1));
    f += tf;
    g += tg;
    if (x != 0) {
      fp += tf * (3 * k) / x;
      gp += tg * (3 * k + 1) / x;
    }
    if (std::fabs(tf) + std::fabs(tg) < 1e-24L * (std::fabs(f) + std::fabs(g))) break;
  }
  if (x == 0) fp = 0;
  return {static_cast<double>(kAi0 * f + kAip0 * g), static_cast<double>(kAi0 * fp + kAip0 * gp)};
}

// u_k of the asymptotic expansion; v_k = -(6k+1)/(6k-1) u_k.
const std::array<double, 40>& u_coeffs() {
  static const std::array<double, 40> u = [] {
    std::array<double, 40> c{};
    c[0] = 1.0;
    for (int k = 1; k < 40; ++k)
      c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k - 1)] * (6.0 * k - 5) * (6.0 * k - 3) *
                                       (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
    return c;
  }();
  return u;
}

double v_coeff(int k) {
  const double u = u_coeffs()[static_cast<std::size_t>(k)];
  return k == 0 ? 1.0 : -(6.0 * k + 1) / (6.0 * k - 1) * u;
}

std::pair<double, double> asymptotic(double x) {
  const auto& u = u_coeffs();
  if (x > 0) {
    const double z = 2.0 / 3.0 * x * std::sqrt(x);
    double su = 0, sv = 0, pw = 1, last = INFINITY;
    for (int k = 0; k < 40; ++k) {
      const double tu = u[static_cast<std::size_t>(k)] * pw;
      if (std::fabs(tu) > last) break;
      last = std::fabs(tu);
      const double sgn = (k % 2) ? -1.0 : 1.0;
      su += sgn * tu;
      sv += sgn * v_coeff(k) * pw;
      pw /= z;
    }
    const double e = std::exp(-z) / (2.0 * kSqrtPi);
    const double q = std::pow(x, 0.25);
    return {e / q * su, -e * q * sv};
  }
  const double r = -x;
  const double z = 2.0 / 3.0 * r * std::sqrt(r);
  double ue = 0, uo = 0, ve = 0, vo = 0, pw = 1, last = INFINITY;
  for (int k = 0; k < 40; ++k) {
    const double tu = u[static_cast<std::size_t>(k)] * pw;
    if (std::fabs(tu) > last) break;
    last = std::fabs(tu);
    // (-1)^{floor(k/2)} pattern of the even/odd sub-series
    const double sgn = ((k / 2) % 2) ? -1.0 : 1.0;
    if (k % 2 == 0) {
      ue += sgn * tu;
      ve += sgn * v_coeff(k) * pw;
    } else {
      uo += sgn * tu;
      vo += sgn * v_coeff(k) * pw;
    }
    pw /= z;
  }
  const double ph = z - M_PI / 4.0;
  const double c = std::cos(ph), s = std::sin(ph);
  const double q = std::pow(r, 0.25);
  return {(c * ue + s * uo) / (kSqrtPi * q), q * (s * ve - c * vo) / kSqrtPi};
}

// Taylor step for y'' = x y from x0 by d.
std::pair<LD, LD> taylor_step(LD x0, LD y0, LD yp0, LD d) {
  LD a_km1 = 0, a_k = y0, a_kp1 = yp0;  // a_{k-1}, a_k, a_{k+1}
  LD y = y0 + yp0 * d, yp = yp0;
  LD dk = d;  // d^{k+1} when adding a_{k+2}
  for (int k = 0; k < 80; ++k) {
    const LD a_kp2 = (x0 * a_k + a_km1) / ((k + 2) * static_cast<LD>(k + 1));
    const LD term_y = a_kp2 * dk * d;
    const LD term_yp = (k + 2) * a_kp2 * dk;
    y += term_y;
    yp += term_yp;
    a_km1 = a_k;
    a_k = a_kp1;
    a_kp1 = a_kp2;
    dk *= d;
    if (k > 4 && std::fabs(term_y) + std::fabs(term_yp) < 1e-26L * (std::fabs(y) + std::fabs(yp))) break;
  }
  return {y, yp};
}

constexpr int kAnchors = 64;  // spacing 1/8 on [0, 8]

const std::array<std::pair<LD, LD>, kAnchors + 1>& anchors() {
  static const auto table = [] {
    std::array<std::pair<LD, LD>, kAnchors + 1> a{};
    const auto seed = asymptotic(kCross);
    a[kAnchors] = {seed.first, seed.second};
    for (int i = kAnchors; i > 0; --i) {
      const LD x0 = kCross * i / kAnchors;
      a[static_cast<std::size_t>(i - 1)] =
          taylor_step(x0, a[static_cast<std::size_t>(i)].first, a[static_cast<std::size_t>(i)].second, -kCross / kAnchors);
    }
    return a;
  }();
  return table;
}

std::pair<double, double> continuation(double x) {
  const auto& a = anchors();
  int i = static_cast<int>(std::lround(x / kCross * kAnchors));
  i = std::clamp(i, 0, kAnchors);
  const LD x0 = kCross * i / kAnchors;
  const auto r = taylor_step(x0, a[static_cast<std::size_t>(i)].first, a[static_cast<std::size_t>(i)].second, x - x0);
  return {static_cast<double>(r.first), static_cast<double>(r.second)};
}

}  // namespace

std::pair<double, double> airy_pair(double x, Method method) {
  switch (method) {
    case Method::Series: return maclaurin(x);
    case Method::Asymptotic: return asymptotic(x);
    case Method::Continuation:
      if (x < 0.0 || x > kCross) throw InvalidArgument("continuation covers [0, 8]");
      return continuation(x);
    case Method::Auto: break;
  }
  if (x > kCross || x < -kCross) return asymptotic(x);
  if (x > 0.0) return continuation(x);
  return maclaurin(x);
}

double airy(double x) { return airy_pair(x).first; }
double airy_prime(double x) { return airy_pair(x).second; }

double airy_kernel(double a, double b) {
  const double d = 0.5 * (a - b);
  if (std::fabs(d) > 0.05) {
    const auto pa = airy_pair(a), pb = airy_pair(b);
    return (pa.first * pb.second - pa.second * pb.first) / (a - b);
  }
  // Expand Ai about the midpoint: with f(s) = Ai(m + s) = sum c_k s^k the
  // numerator f(d) f'(-d) - f'(d) f(-d) is odd in d.
  const double m = 0.5 * (a + b);
  const auto pm = airy_pair(m);
  constexpr int K = 18;
  std::array<double, K + 2> c{};
  c[0] = pm.first;
  c[1] = pm.second;
  for (int k = 0; k + 2 < K + 2; ++k)
    c[static_cast<std::size_t>(k + 2)] =
        (m * c[static_cast<std::size_t>(k)] + (k > 0 ? c[static_cast<std::size_t>(k - 1)] : 0.0)) / ((k + 2.0) * (k + 1.0));
  double sum = 0.0;
  for (int j = 0; j < K; ++j)
    for (int k = 0; k < K; ++k) {
      if ((j + k) % 2 == 0) continue;
      const double bk = (k + 1) * c[static_cast<std::size_t>(k + 1)];
      const double sgn = ((k % 2) ? -1.0 : 1.0) - ((j % 2) ? -1.0 : 1.0);
      sum += c[static_cast<std::size_t>(j)] * bk * sgn * std::pow(d, j + k - 1) * 0.5;
    }
  return sum;
}

double airy_product_kernel(double x, double t, double z) {
  return 2.0 * airy_kernel(t / 2.0 + x, z / 2.0 + x);
}

fredholm::HalfLineGrid default_product_grid() { return fredholm::make_panel_grid(0.0, 48.0, 96, 16); }

double airy_product_quadrature(double x, double t, double z, const fredholm::HalfLineGrid& grid) {
  const double end = 2.0 * x + grid.a + grid.T;
  const double tail = std::fabs(airy((t + end) / 2.0) * airy((end + z) / 2.0));
  if (tail > 1e-16) {
    std::ostringstream os;
    os << "Airy product integrand still " << tail << " at s = " << end;
    throw TailTooFat(os.str());
  }
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double sv = 2.0 * x + grid.nodes[i];
    s += grid.weights[i] * airy((t + sv) / 2.0) * airy((sv + z) / 2.0);
  }
  return s;
}

double airy_factorization_residual(double x, const fredholm::HalfLineGrid& grid,
                                   const std::vector<std::array<double, 2>>& pairs) {
  if (x < -5.0) throw InvalidArgument("airy_factorization_residual needs x >= -5");
  double worst = 0.0;
  for (const auto& p : pairs)
    worst = std::max(worst, std::fabs(airy_product_kernel(x, p[0], p[1]) -
                                      airy_product_quadrature(x, p[0], p[1], grid)));
  return worst;
}

double airy_factorization_residual(double x, const fredholm::HalfLineGrid& grid) {
  static const std::vector<std::array<double, 2>> pairs = {
      {0.0, 0.0}, {1.0, 2.0}, {2.0, 1.0}, {0.5, 3.0}, {1.5, 1.5}, {3.0, 0.25}, {4.0, 4.0}, {0.1, 0.1000001}};
  return airy_factorization_residual(x, grid, pairs);
}

fredholm::HalfLineGrid f2_grid(const F2Params& p) {
  const int panels = std::max(1, static_cast<int>(std::ceil(p.T_sigma / p.panel)));
  return fredholm::make_panel_grid(0.0, p.T_sigma, panels, p.order);
}

fredholm::DiscretizedKernel airy_hankel(double x, const fredholm::HalfLineGrid& grid) {
  return fredholm::hankel_operator([](double s) { return cplx(airy(s)); }, x / 2.0, grid, 1e-14, "Ai");
}

fredholm::DiscretizedKernel airy_hankel_prime(double x, const fredholm::HalfLineGrid& grid) {
  return fredholm::hankel_operator([](double s) { return cplx(airy_prime(s)); }, x / 2.0, grid, 1e-14,
                                   "Ai'");
}

double f2_determinant(double x, const F2Params& p) {
  if (x < -8.0) throw InvalidArgument("f2_determinant supports x >= -8");
  const auto H = airy_hankel(x, f2_grid(p));
  return (fredholm::fredholm_det(H, -1.0) * fredholm::fredholm_det(H, 1.0)).real();
}

fredholm::DiscretizedKernel airy_kernel_operator(double x, double T, double panel) {
  const int panels = std::max(1, static_cast<int>(std::ceil(T / panel)));
  auto g = fredholm::make_panel_grid(x, x + T, panels, 16);
  auto K = fredholm::discretize([](double a, double b) { return cplx(airy_kernel(a, b)); }, g, "airy");
  K.shift = x;
  return K;
}

}  // namespace taulab::airy
