#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "taulab/errors.hpp"

using taulab::cli::kExitUsage;

int main(int argc, char** argv) {
  CLI::App app{"taulab: tau-function verification suites"};
  app.require_subcommand(1);

  std::string out, config_path, seed_text, tol_text;
  bool stamp = false;
  app.add_option("--out", out, "Output directory");
  app.add_option("--seed", seed_text, "Seed for randomized suites");
  app.add_option("--tol-scale", tol_text, "Multiplier applied to every tolerance (> 0)");
  app.add_option("--config", config_path, "JSON config file");
  app.add_flag("--stamp", stamp, "Add a timestamp to file headers");

  // Subcommand options stay strings so absent ones fall through to the
  // config file and the defaults.
  std::map<std::string, std::map<std::string, std::string>> values;
  for (const auto& name : taulab::cli::commands()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " suite");
    sub->fallthrough();
    const auto defaults = taulab::cli::default_params(name);
    for (const auto& [key, def] : defaults.items())
      sub->add_option("--" + key, values[name][key], "default: " + def.dump());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    nlohmann::json flag_params = nlohmann::json::object();
    for (const auto& [key, text] : values[command])
      if (sub->count("--" + key) > 0) flag_params[key] = text;

    taulab::cli::CommonFlags flags;
    if (app.count("--seed") > 0) {
      std::size_t used = 0;
      const auto s = std::stoull(seed_text, &used);
      if (used != seed_text.size()) throw taulab::cli::UsageError("--seed must be a non-negative integer");
      flags.seed = s;
    }
    if (app.count("--tol-scale") > 0) {
      std::size_t used = 0;
      const double v = std::stod(tol_text, &used);
      if (used != tol_text.size()) throw taulab::cli::UsageError("--tol-scale must be a number");
      flags.tol_scale = v;
    }
    if (app.count("--out") > 0) flags.out_dir = out;
    flags.stamp = stamp;

    const auto file = config_path.empty() ? nlohmann::json::object() : taulab::cli::load_config_file(config_path);
    const auto cfg = taulab::cli::resolve(command, file, flag_params, flags);
    return taulab::cli::run_command(cfg, std::cout);
  } catch (const taulab::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
  } catch (const taulab::Error& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
  } catch (const std::logic_error& e) {  // stoull/stod and json type errors
    std::cerr << "usage error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
  }
  return kExitUsage;
}
