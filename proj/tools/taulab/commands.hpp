#pragma once

#include <iosfwd>

#include "config.hpp"

namespace taulab::cli {

// Runs one resolved command, writing artifacts under cfg.out_dir and a short
// log to `log`. Returns an exit code; throws UsageError on bad configuration.
int run_command(const RunConfig& cfg, std::ostream& log);

int cmd_soliton(const RunConfig& cfg, std::ostream& log);
int cmd_tw(const RunConfig& cfg, std::ostream& log);
int cmd_theta(const RunConfig& cfg, std::ostream& log);
int cmd_poles(const RunConfig& cfg, std::ostream& log);
int cmd_gl(const RunConfig& cfg, std::ostream& log);
int cmd_kp(const RunConfig& cfg, std::ostream& log);
int cmd_report(const RunConfig& cfg, std::ostream& log);

}  // namespace taulab::cli
