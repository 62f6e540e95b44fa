#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace taulab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitTolerance = 3;
inline constexpr int kSchemaVersion = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
  std::string out_dir = ".";
  bool stamp = false;
};

// Settings given on the command line; unset fields fall through to the
// config file and then to defaults.
struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_scale;
  std::optional<std::string> out_dir;
  bool stamp = false;
};

nlohmann::json default_params(const std::string& command);
const std::vector<std::string>& commands();

// Layers defaults < config file < flags. The config file may hold common
// keys ("seed", "tol_scale", "out") at top level and per-command objects.
RunConfig resolve(const std::string& command, const nlohmann::json& file, const nlohmann::json& flag_params,
                  const CommonFlags& flags);
nlohmann::json load_config_file(const std::string& path);

// "a:b:step" inclusive of b up to rounding, or a single number.
std::vector<double> parse_range(const std::string& spec);
// "1,2,3" or a JSON array of numbers.
std::vector<double> parse_list(const nlohmann::json& v);
double get_number(const nlohmann::json& params, const std::string& key);
std::string get_string(const nlohmann::json& params, const std::string& key);
std::vector<double> get_range(const nlohmann::json& params, const std::string& key);

// "# key: value" lines echoing the resolved configuration.
std::string header_block(const RunConfig& cfg);
nlohmann::json config_echo(const RunConfig& cfg);

}  // namespace taulab::cli
