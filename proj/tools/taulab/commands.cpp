#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "taulab/acceptance.hpp"
#include "taulab/airy.hpp"
#include "taulab/elliptic.hpp"
#include "taulab/io.hpp"
#include "taulab/painleve.hpp"
#include "taulab/scattering.hpp"
#include "taulab/soliton.hpp"

namespace taulab::cli {

using nlohmann::json;

namespace {

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  const auto path = std::filesystem::path(cfg.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path.string());
  out.precision(17);
  return out;
}

void write_json(const RunConfig& cfg, const std::string& name, json body) {
  body["config"] = config_echo(cfg);
  body["schema_version"] = kSchemaVersion;
  auto out = open_output(cfg, name);
  out << body.dump(2) << "\n";
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Up to k entries spread evenly over v.
std::vector<double> spread(const std::vector<double>& v, std::size_t k) {
  if (v.size() <= k) return v;
  std::vector<double> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(v[i * (v.size() - 1) / (k - 1)]);
  return out;
}

struct Gate {
  bool pass = true;
  json checks = json::array();
  void check(const std::string& name, double value, double bound) {
    const bool ok = std::isfinite(value) && value <= bound;
    pass = pass && ok;
    checks.push_back({{"name", name}, {"value", num(value)}, {"bound", bound}, {"pass", ok}});
  }
  void info(const std::string& name, double value) {
    checks.push_back({{"name", name}, {"value", num(value)}, {"bound", nullptr}, {"pass", true}});
  }
};

int finish(const RunConfig& cfg, const std::string& name, Gate& gate, json body, std::ostream& log) {
  body["checks"] = gate.checks;
  body["pass"] = gate.pass;
  write_json(cfg, name, std::move(body));
  for (const auto& c : gate.checks) {
    log << (c["bound"].is_null() ? "info " : (c["pass"].get<bool>() ? "ok   " : "FAIL ")) << c["name"].get<std::string>()
        << " = " << c["value"].dump();
    if (!c["bound"].is_null()) log << " (bound " << c["bound"].dump() << ")";
    log << "\n";
  }
  return gate.pass ? kExitOk : kExitTolerance;
}

std::vector<double> soliton_lambdas(const RunConfig& cfg) {
  const auto l = parse_list(cfg.params.at("lambdas"));
  if (l.empty()) throw UsageError("--lambdas needs at least one value, e.g. --lambdas 1,2,3");
  std::set<double> seen;
  for (double v : l) {
    if (!(v > 0.0)) throw UsageError("soliton parameters must be positive");
    if (!seen.insert(v).second) throw UsageError("soliton parameters must be distinct");
  }
  return l;
}

}  // namespace

int cmd_soliton(const RunConfig& cfg, std::ostream& log) {
  const auto lambdas = soliton_lambdas(cfg);
  const auto xs = get_range(cfg.params, "x");
  const auto ts = get_range(cfg.params, "t3");
  const double lmax = *std::max_element(lambdas.begin(), lambdas.end());
  const auto sys = acceptance::multi_soliton(lambdas);
  const soliton::EvolvedSystem ev(sys, 0.0);

  const auto field = soliton::kdv_field(ev, xs, ts);
  {
    auto out = open_output(cfg, "soliton_u.csv");
    out << header_block(cfg) << "x,t,u\n";
    for (std::size_t j = 0; j < ts.size(); ++j)
      for (std::size_t i = 0; i < xs.size(); ++i)
        out << xs[i] << "," << ts[j] << "," << field.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) << "\n";
  }

  Gate gate;
  double expansion = 0.0;
  if (lambdas.size() <= 16) {
    for (double x : spread(xs, 9))
      for (cplx mu : {cplx(1.0), cplx(-0.5), cplx(0.0, 1.0)})
        expansion = std::max(expansion, soliton::soliton_expansion_gap(sys, x, mu));
    gate.check("subset expansion vs det (relative)", expansion, 1e-10 * cfg.tol_scale);
  }

  std::vector<std::array<double, 2>> pts;
  for (double x : spread(xs, 9))
    for (double t : spread(ts, 3)) pts.push_back({x, t});
  const auto r = soliton::kdv_residual(ev, pts, 0.01, soliton::KdvForm::Normalized, 8, 1.0 / (lmax * lmax));
  gate.check("KdV residual", r.max, 1e-5 * cfg.tol_scale);
  const auto order = soliton::kdv_residual(ev, pts, 0.04, soliton::KdvForm::Normalized, 2, 1.0 / (lmax * lmax));
  gate.info("KdV convergence order", order.order_estimate);
  gate.check("KdV convergence order deficit (1.9 - order, <= 0)", 1.9 - order.order_estimate, 0.0);
  const auto r5 = soliton::kdv5_residual(ev, pts, 0.02, 6);
  // Fifth x-derivatives by differences only resolve slow fields in double
  // precision; faster spectra are reported without gating.
  if (lmax <= 1.2)
    gate.check("KdV5 residual", r5.max, 1e-4 * cfg.tol_scale);
  else
    gate.info("KdV5 residual (not gated, lambda_max > 1.2)", r5.max);

  json body = {{"lambdas", lambdas}, {"kdv", json::parse(taulab::to_json(r))}, {"kdv5", json::parse(taulab::to_json(r5))}};
  return finish(cfg, "soliton_report.json", gate, body, log);
}

int cmd_tw(const RunConfig& cfg, std::ostream& log) {
  const double xmin = get_number(cfg.params, "xmin"), xmax = get_number(cfg.params, "xmax");
  const double step = get_number(cfg.params, "step"), T = get_number(cfg.params, "tsigma");
  const int nodes = static_cast<int>(get_number(cfg.params, "nodes"));
  if (xmin < -6.0) throw UsageError("xmin must be >= -6 (Painleve integration range)");
  if (!(xmax >= xmin) || !(step > 0.0)) throw UsageError("need xmax >= xmin and step > 0");
  if (nodes < 2 || !(T > 0.0)) throw UsageError("need nodes >= 2 and tsigma > 0");
  airy::F2Params fp;
  fp.T_sigma = T;
  if (nodes < 16) {
    fp.order = nodes;
    fp.panel = T;
  } else {
    const int panels = (nodes + 15) / 16;
    fp.order = 16;
    fp.panel = T / panels;
  }
  const painleve::PainleveSolution sol(xmin);
  auto out = open_output(cfg, "tw_f2.csv");
  out << header_block(cfg) << "x,F2_det,F2_painleve,diff\n";
  double worst = 0.0, drop = 0.0, prev = -1.0, last_det = 0.0, last_p = 0.0;
  const auto n = static_cast<long>(std::floor((xmax - xmin) / step + 1e-9));
  for (long i = 0; i <= n; ++i) {
    const double x = xmin + static_cast<double>(i) * step;
    const double d = airy::f2_determinant(x, fp), p = painleve::f2_painleve(x, sol);
    out << x << "," << d << "," << p << "," << std::abs(d - p) << "\n";
    worst = std::max(worst, std::abs(d - p));
    if (prev >= 0.0) drop = std::max(drop, prev - d);
    prev = d;
    last_det = d;
    last_p = p;
  }
  Gate gate;
  gate.check("max |F2_det - F2_painleve|", worst, 1e-5 * cfg.tol_scale);
  gate.check("largest decrease of F2_det", drop, 0.0);
  gate.info("last F2_det - 1", last_det - 1.0);
  gate.info("last F2_painleve - 1", last_p - 1.0);
  json body = {{"quadrature", {{"order", fp.order}, {"panel", fp.panel}, {"T_sigma", fp.T_sigma}}}};
  return finish(cfg, "tw_report.json", gate, body, log);
}

int cmd_theta(const RunConfig& cfg, std::ostream& log) {
  const double q = get_number(cfg.params, "q");
  const int N = static_cast<int>(get_number(cfg.params, "N"));
  const int points = static_cast<int>(get_number(cfg.params, "points"));
  if (!(q > 0.0 && q < 1.0)) throw UsageError("q must lie in (0, 1)");
  if (N < 1 || points < 2) throw UsageError("need N >= 1 and points >= 2");
  const auto sys = elliptic::build_theta_system(q, N);
  auto out = open_output(cfg, "theta.csv");
  out << header_block(cfg) << "x,tau_re,tau_im,theta_product_re,theta_product_im,diff\n";
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    // avoids the zeros at 0 and pi
    const double x = 0.1 + (kPi - 0.2) * k / (points - 1);
    const cplx t = elliptic::tau_periodic(sys, x), p = elliptic::theta_product_expression(x, q);
    out << x << "," << t.real() << "," << t.imag() << "," << p.real() << "," << p.imag() << "," << std::abs(t - p) << "\n";
    worst = std::max(worst, std::abs(t - p));
  }
  Gate gate;
  gate.check("max |tau - theta product|", worst, 1e-9 * cfg.tol_scale);
  gate.check("zero set distance to lattice", elliptic::zero_set_error(q, N), 1e-8 * cfg.tol_scale);
  gate.info("truncation tail bound", sys.tail_trace());
  const auto pc = elliptic::potential_constant(q, N);
  json body = {{"potential_constant", {{"fitted", pc.fitted}, {"half_period", pc.half_period}, {"at_one_half", pc.literal_half}}}};
  return finish(cfg, "theta_report.json", gate, body, log);
}

int cmd_poles(const RunConfig& cfg, std::ostream& log) {
  const int m = static_cast<int>(get_number(cfg.params, "m"));
  const double q = get_number(cfg.params, "q"), tmax = get_number(cfg.params, "tmax"), dt = get_number(cfg.params, "dt");
  if (m < 1) throw UsageError("need m >= 1");
  if (!(q > 0.0 && q < 1.0)) throw UsageError("q must lie in (0, 1)");
  if (!(dt > 0.0) || tmax < 0.0) throw UsageError("need dt > 0 and tmax >= 0");
  const auto p = elliptic::EllipticParams::from_nome(q);
  const cplx c(get_number(cfg.params, "center_re"), get_number(cfg.params, "center_im"));
  const auto x0 = elliptic::symmetric_poles(m, c, p);
  const auto tr = elliptic::pole_dynamics(x0, p, tmax, dt, {0.1, 0.9, 1.7, 2.5});
  std::map<double, double> kdv_at;
  for (std::size_t i = 0; i < tr.kdv.grid.size(); ++i) {
    auto& slot = kdv_at[tr.kdv.grid[i]];
    slot = std::max(slot, tr.kdv.residuals[i]);
  }
  auto out = open_output(cfg, "poles.csv");
  out << header_block(cfg) << "t";
  for (int j = 1; j <= m; ++j) out << ",x" << j << "_re,x" << j << "_im";
  out << ",constraint_residual,kdv_residual\n";
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    out << tr.t[i];
    for (const cplx& x : tr.poles[i]) out << "," << x.real() << "," << x.imag();
    const auto it = kdv_at.find(tr.t[i]);
    out << "," << tr.constraint[i] << ",";
    if (it != kdv_at.end())
      out << it->second;
    else
      out << "nan";
    out << "\n";
  }
  Gate gate;
  gate.check("constraint drift", tr.constraint_drift, 1e-6 * cfg.tol_scale);
  gate.info("pole-field KdV residual", tr.kdv.max);
  return finish(cfg, "poles_report.json", gate, json::object(), log);
}

int cmd_gl(const RunConfig& cfg, std::ostream& log) {
  const std::string path = get_string(cfg.params, "system");
  const auto sys = path.empty() ? acceptance::three_soliton() : io::load_system(path);
  const double mu = get_number(cfg.params, "mu");
  const auto xs = get_range(cfg.params, "x"), ys = get_range(cfg.params, "y");
  const auto T = inverse::gl_kernel(sys, mu);
  auto out = open_output(cfg, "gl.csv");
  out << header_block(cfg) << "x,y,residual\n";
  double worst = 0.0, trace = 0.0;
  for (double x : xs) {
    for (double y : ys) {
      const double r = inverse::gl_residual(T, x, y);
      out << x << "," << y << "," << r << "\n";
      worst = std::max(worst, r);
    }
    trace = std::max(trace, inverse::trace_identity_residual(sys, mu, x));
  }
  Gate gate;
  gate.check("Gelfand-Levitan residual", worst, 1e-7 * cfg.tol_scale);
  gate.check("trace identity residual", trace, 1e-9 * cfg.tol_scale);
  return finish(cfg, "gl_report.json", gate, {{"system", path.empty() ? "builtin three-soliton" : path}}, log);
}

int cmd_kp(const RunConfig& cfg, std::ostream& log) {
  const auto lambdas = soliton_lambdas(cfg);
  const int n = static_cast<int>(get_number(cfg.params, "n"));
  if (n < 1 || n > static_cast<int>(lambdas.size())) throw UsageError("need 1 <= n <= number of lambdas");
  const auto xs = get_range(cfg.params, "x"), ys = get_range(cfg.params, "y");
  const double t = get_number(cfg.params, "t");
  const auto sys = acceptance::multi_soliton(lambdas);
  auto out = open_output(cfg, "kp_tau.csv");
  out << header_block(cfg) << "x,y,t,tau_re,tau_im,u_re,u_im\n";
  std::vector<std::array<double, 3>> pts;
  for (double y : ys)
    for (double x : xs) {
      const auto k = soliton::kp_tau(sys, n, x, y, t);
      out << x << "," << y << "," << t << "," << k.tau.real() << "," << k.tau.imag() << "," << k.u.real() << ","
          << k.u.imag() << "\n";
      pts.push_back({x, y, t});
    }
  const soliton::Tau3 tau = [&](double x, double y, double s) { return soliton::kp_tau(sys, n, x, y, s).tau; };
  Gate gate;
  gate.check("Hirota residual", soliton::hirota_residual(tau, pts, 0.04, 8).max, 1e-4 * cfg.tol_scale);
  // The linear equations are exercised on seeded random systems, independent
  // of the soliton spectrum above.
  std::mt19937_64 rng(cfg.seed + 8);
  const auto a = acceptance::random_diagonal_system(rng, 3), b = acceptance::random_diagonal_system(rng, 3);
  const soliton::KPParams kp{1.0, 1.0, 0.3};
  std::vector<std::array<double, 4>> p4;
  for (double x : {0.0, 0.5})
    for (double z : {0.2, 0.8}) p4.push_back({x, z, 0.1, 0.05});
  const auto ks = soliton::kp_scattering_residual(a, b, kp, p4, 0.01);
  gate.check("linear KP residual (t equation)", ks.linear_t.max, 1e-6 * cfg.tol_scale);
  gate.check("linear KP residual (y equation)", ks.linear_y.max, 1e-6 * cfg.tol_scale);
  gate.info("Sylvester derivative residual", ks.sylvester.max);
  gate.info("reduction det(I+S) vs tau", soliton::kp_scattering_residual(a, a, kp, p4, 0.01).reduction.max);
  return finish(cfg, "kp_report.json", gate, {{"n", n}, {"lambdas", lambdas}}, log);
}

int cmd_report(const RunConfig& cfg, std::ostream& log) {
  acceptance::Options opt;
  opt.seed = cfg.seed;
  opt.tol_scale = cfg.tol_scale;
  std::stringstream ss(get_string(cfg.params, "only"));
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) opt.only.push_back(tok);
  bool any = false;
  for (const auto& c : acceptance::criteria()) any = any || acceptance::selected(c, opt.only);
  if (!any) throw UsageError("--only matches no criterion");
  const auto results = acceptance::run_all(opt);
  bool pass = true;
  for (const auto& r : results) {
    log << acceptance::summary_line(r) << "\n";
    pass = pass && r.pass;
  }
  auto out = open_output(cfg, "report.json");
  out << acceptance::to_json(results, opt) << "\n";
  return pass ? kExitOk : kExitTolerance;
}

int run_command(const RunConfig& cfg, std::ostream& log) {
  if (cfg.command == "soliton") return cmd_soliton(cfg, log);
  if (cfg.command == "tw") return cmd_tw(cfg, log);
  if (cfg.command == "theta") return cmd_theta(cfg, log);
  if (cfg.command == "poles") return cmd_poles(cfg, log);
  if (cfg.command == "gl") return cmd_gl(cfg, log);
  if (cfg.command == "kp") return cmd_kp(cfg, log);
  if (cfg.command == "report") return cmd_report(cfg, log);
  throw UsageError("unknown command '" + cfg.command + "'");
}

}  // namespace taulab::cli
