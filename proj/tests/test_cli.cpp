#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "commands.hpp"
#include "config.hpp"

using namespace taulab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("taulab_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string body(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("#", 0) != 0) out += line + "\n";
  return out;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(TAULAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig config_for(const std::string& command, const nlohmann::json& flags, const fs::path& out) {
  CommonFlags f;
  f.out_dir = out.string();
  return resolve(command, nlohmann::json::object(), flags, f);
}

}  // namespace

TEST(Config, Precedence) {
  const nlohmann::json file = {{"seed", 5}, {"tol_scale", 2.0}, {"theta", {{"q", 0.4}, {"N", 12}}}};
  CommonFlags flags;
  flags.seed = 9;
  const auto cfg = resolve("theta", file, {{"N", "20"}}, flags);
  EXPECT_EQ(cfg.seed, 9u);                       // flag beats file
  EXPECT_DOUBLE_EQ(cfg.tol_scale, 2.0);          // file beats default
  EXPECT_DOUBLE_EQ(get_number(cfg.params, "q"), 0.4);
  EXPECT_DOUBLE_EQ(get_number(cfg.params, "N"), 20.0);
  EXPECT_DOUBLE_EQ(get_number(cfg.params, "points"), 20.0);  // default
}

TEST(Config, Validation) {
  CommonFlags bad;
  bad.tol_scale = -1.0;
  EXPECT_THROW(resolve("report", nlohmann::json::object(), nlohmann::json::object(), bad), UsageError);
  EXPECT_THROW(resolve("theta", {{"theta", {{"bogus", 1}}}}, nlohmann::json::object(), {}), UsageError);
  EXPECT_THROW(default_params("nope"), UsageError);
  EXPECT_THROW(load_config_file("/nonexistent.json"), UsageError);
}

TEST(Config, Ranges) {
  const auto r = parse_range("0:1:0.25");
  ASSERT_EQ(r.size(), 5u);
  EXPECT_DOUBLE_EQ(r.back(), 1.0);
  EXPECT_EQ(parse_range("0.5").size(), 1u);
  EXPECT_THROW(parse_range("1:0:0.1"), UsageError);
  EXPECT_THROW(parse_range("0:1"), UsageError);
  EXPECT_THROW(parse_range("a:b:c"), UsageError);
  EXPECT_EQ(parse_list(std::string("1,2,3")).size(), 3u);
  EXPECT_THROW(parse_list(std::string("1,x")), UsageError);
}

TEST(Config, HeaderEchoesSeedAndStampOnlyOnRequest) {
  auto cfg = config_for("theta", nlohmann::json::object(), scratch("hdr"));
  const auto h = header_block(cfg);
  EXPECT_NE(h.find("# seed: "), std::string::npos);
  EXPECT_NE(h.find("# config: "), std::string::npos);
  EXPECT_EQ(h.find("stamp"), std::string::npos);
  cfg.stamp = true;
  EXPECT_NE(header_block(cfg).find("# stamp: "), std::string::npos);
}

TEST(Commands, SolitonWritesArtifacts) {
  const auto out = scratch("soliton");
  std::ostringstream log;
  EXPECT_EQ(run_command(config_for("soliton", {{"lambdas", "1"}, {"x", "0:4:0.01"}}, out), log), kExitOk) << log.str();
  EXPECT_TRUE(fs::exists(out / "soliton_u.csv"));
  const auto report = nlohmann::json::parse(slurp(out / "soliton_report.json"));
  EXPECT_TRUE(report["pass"].get<bool>());
  EXPECT_EQ(report["schema_version"], kSchemaVersion);
}

TEST(Commands, SolitonRejectsBadSpectra) {
  std::ostringstream log;
  const auto out = scratch("soliton_bad");
  EXPECT_THROW(run_command(config_for("soliton", {{"lambdas", ""}}, out), log), UsageError);
  EXPECT_THROW(run_command(config_for("soliton", {{"lambdas", "1,1"}}, out), log), UsageError);
  EXPECT_THROW(run_command(config_for("soliton", {{"lambdas", "-2"}}, out), log), UsageError);
}

TEST(Commands, ThetaDiffColumn) {
  const auto out = scratch("theta");
  std::ostringstream log;
  EXPECT_EQ(run_command(config_for("theta", {{"q", "0.3"}, {"N", "40"}}, out), log), kExitOk);
  std::istringstream in(body(slurp(out / "theta.csv")));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,tau_re,tau_im,theta_product_re,theta_product_im,diff");
  int rows = 0;
  while (std::getline(in, line)) {
    const double diff = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_LE(diff, 1e-9);
    ++rows;
  }
  EXPECT_EQ(rows, 20);
}

TEST(Commands, PolesAndGl) {
  const auto out = scratch("poles");
  std::ostringstream log;
  EXPECT_EQ(run_command(config_for("poles", {{"m", "3"}, {"tmax", "0.01"}}, out), log), kExitOk);
  EXPECT_NE(slurp(out / "poles.csv").find("t,x1_re,x1_im,x2_re,x2_im,x3_re,x3_im,constraint_residual,kdv_residual"),
            std::string::npos);
  EXPECT_EQ(run_command(config_for("gl", {{"system", TAULAB_DATA_DIR "/threesoliton.json"}}, out), log), kExitOk);
  EXPECT_NE(slurp(out / "gl.csv").find("x,y,residual"), std::string::npos);
}

TEST(Commands, TravellingWaveNodeCounts) {
  const auto out = scratch("tw");
  std::ostringstream log;
  EXPECT_EQ(run_command(config_for("tw", {{"xmin", "-2"}, {"xmax", "8"}, {"step", "1"}}, out), log), kExitOk);
  const auto report = nlohmann::json::parse(slurp(out / "tw_report.json"));
  for (const auto& c : report["checks"])
    if (c["name"] == "last F2_det - 1") EXPECT_LT(std::abs(c["value"].get<double>()), 1e-9);
  // Too few nodes cannot meet the tolerance; a tight scale exposes the gap.
  EXPECT_EQ(run_command(config_for("tw", {{"nodes", "8"}, {"xmin", "-4"}, {"xmax", "0"}, {"step", "1"}}, out), log),
            kExitTolerance);
  EXPECT_THROW(run_command(config_for("tw", {{"xmin", "-7"}}, out), log), UsageError);
}

TEST(Commands, KpReport) {
  const auto out = scratch("kp");
  std::ostringstream log;
  EXPECT_EQ(run_command(config_for("kp", nlohmann::json::object(), out), log), kExitOk) << log.str();
  EXPECT_THROW(run_command(config_for("kp", {{"n", "9"}}, out), log), UsageError);
}

TEST(Commands, Determinism) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  std::ostringstream log;
  for (const auto& dir : {a, b}) {
    auto cfg = config_for("soliton", {{"lambdas", "1,2"}}, dir);
    cfg.stamp = dir == b;  // stamps may only change the header
    run_command(cfg, log);
    run_command(config_for("theta", nlohmann::json::object(), dir), log);
  }
  for (const char* f : {"soliton_u.csv", "theta.csv"}) {
    EXPECT_EQ(body(slurp(a / f)), body(slurp(b / f))) << f;
    EXPECT_FALSE(body(slurp(a / f)).empty());
  }
  EXPECT_EQ(slurp(a / "theta.csv"), slurp(b / "theta.csv"));
}

TEST(Binary, ExitCodes) {
  const auto out = scratch("bin");
  EXPECT_EQ(run_binary("--out " + out.string() + " --tol-scale -1 report"), kExitUsage);
  EXPECT_EQ(run_binary("--out " + out.string() + " soliton --lambdas ''"), kExitUsage);
  EXPECT_EQ(run_binary("--out " + out.string() + " report --only no-such-criterion"), kExitUsage);
  EXPECT_EQ(run_binary("--out " + out.string() + " --seed abc theta"), kExitUsage);
  EXPECT_EQ(run_binary("--out " + out.string() + " frobnicate"), kExitUsage);
  EXPECT_EQ(run_binary("--out " + out.string() + " theta --q 0.3 --N 40"), kExitOk);
  EXPECT_EQ(run_binary("--out " + out.string() + " report --only airy"), kExitOk);
  const auto report = nlohmann::json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report["criteria"].size(), 1u);
}
