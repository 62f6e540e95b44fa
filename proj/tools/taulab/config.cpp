#include "config.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "taulab/acceptance.hpp"

namespace taulab::cli {

using nlohmann::json;

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"soliton", "tw", "theta", "poles", "gl", "kp", "report"};
  return c;
}

json default_params(const std::string& command) {
  if (command == "soliton") return {{"lambdas", "1"}, {"x", "-4:4:0.05"}, {"t3", "0:0.2:0.05"}};
  if (command == "tw") return {{"xmin", -6.0}, {"xmax", 4.0}, {"step", 0.25}, {"nodes", 448}, {"tsigma", 14.0}};
  if (command == "theta") return {{"q", 0.3}, {"N", 40}, {"points", 20}};
  if (command == "poles")
    return {{"m", 3}, {"q", 0.1}, {"tmax", 0.01}, {"dt", 1e-4}, {"center_re", 0.3}, {"center_im", 0.6}};
  if (command == "gl") return {{"system", ""}, {"mu", 1.0}, {"x", "0:2:0.5"}, {"y", "0:2:0.5"}};
  if (command == "kp") return {{"lambdas", "0.6,0.9,1.3,1.7"}, {"n", 2}, {"x", "-0.5:0.7:0.6"}, {"y", "0:0.3:0.3"}, {"t", 0.1}};
  if (command == "report") return {{"only", ""}};
  throw UsageError("unknown command '" + command + "'");
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw UsageError("config file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
}

RunConfig resolve(const std::string& command, const json& file, const json& flag_params, const CommonFlags& flags) {
  RunConfig cfg;
  cfg.command = command;
  cfg.seed = acceptance::kDefaultSeed;
  cfg.params = default_params(command);

  if (file.contains("seed")) cfg.seed = file["seed"].get<std::uint64_t>();
  if (file.contains("tol_scale")) cfg.tol_scale = file["tol_scale"].get<double>();
  if (file.contains("out")) cfg.out_dir = file["out"].get<std::string>();
  if (file.contains("stamp")) cfg.stamp = file["stamp"].get<bool>();
  if (file.contains(command)) {
    if (!file[command].is_object()) throw UsageError("config section '" + command + "' must be an object");
    for (const auto& [k, v] : file[command].items()) {
      if (!cfg.params.contains(k)) throw UsageError("unknown parameter '" + k + "' for " + command);
      cfg.params[k] = v;
    }
  }

  for (const auto& [k, v] : flag_params.items()) cfg.params[k] = v;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.tol_scale) cfg.tol_scale = *flags.tol_scale;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  cfg.stamp = cfg.stamp || flags.stamp;

  if (!(cfg.tol_scale > 0.0) || !std::isfinite(cfg.tol_scale))
    throw UsageError("tolerance scale must be a positive number");
  return cfg;
}

std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad range '" + spec + "', expected a:b:step");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3) throw UsageError("bad range '" + spec + "', expected a:b:step");
  const double a = parts[0], b = parts[1], h = parts[2];
  if (!(h > 0.0) || b < a) throw UsageError("range '" + spec + "' needs step > 0 and b >= a");
  const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
  if (n > 1000000) throw UsageError("range '" + spec + "' is too long");
  std::vector<double> out;
  for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * h);
  return out;
}

std::vector<double> parse_list(const json& v) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw UsageError("list entries must be numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_string()) throw UsageError("expected a comma-separated list");
  std::stringstream ss(v.get<std::string>());
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad list entry '" + tok + "'");
    }
  }
  return out;
}

double get_number(const json& params, const std::string& key) {
  const json& v = params.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      const std::string s = v.get<std::string>();
      const double d = std::stod(s, &used);
      if (used == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  throw UsageError("parameter '" + key + "' must be a number");
}

std::string get_string(const json& params, const std::string& key) {
  const json& v = params.at(key);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::vector<double> get_range(const json& params, const std::string& key) {
  const json& v = params.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (v.is_array()) return parse_list(v);
  return parse_range(get_string(params, key));
}

json config_echo(const RunConfig& cfg) {
  return {{"command", cfg.command}, {"params", cfg.params}, {"seed", cfg.seed}, {"tol_scale", cfg.tol_scale},
          {"schema_version", kSchemaVersion}};
}

std::string header_block(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# taulab " << cfg.command << "\n";
  os << "# schema_version: " << kSchemaVersion << "\n";
  os << "# seed: " << cfg.seed << "\n";
  os << "# tol_scale: " << cfg.tol_scale << "\n";
  os << "# config: " << cfg.params.dump() << "\n";
  if (cfg.stamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    os << "# stamp: " << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ") << "\n";
  }
  return os.str();
}

}  // namespace taulab::cli
