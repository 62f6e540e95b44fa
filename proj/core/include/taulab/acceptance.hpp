#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "taulab/linsys.hpp"

namespace taulab::acceptance {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeed = 20240611;

// One measured quantity against its bound. `upper` selects value <= bound,
// otherwise value >= bound; `scaled` bounds are multiplied by tol_scale.
struct Measurement {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool upper = true;
  bool gating = true;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string key;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::string error;  // non-empty when the suite threw
  std::vector<Measurement> measurements;
};

struct Options {
  std::uint64_t seed = kDefaultSeed;
  double tol_scale = 1.0;
  std::vector<std::string> only;  // ids or key substrings; empty means all
};

struct CriterionInfo {
  int id;
  const char* key;
  const char* title;
};

const std::vector<CriterionInfo>& criteria();
bool selected(const CriterionInfo& c, const std::vector<std::string>& only);

CriterionResult run_criterion(int id, const Options& opt);
std::vector<CriterionResult> run_all(const Options& opt);

std::string to_json(const std::vector<CriterionResult>& results, const Options& opt);
std::string summary_line(const CriterionResult& r);

// Reference systems shared by the suites, the CLI and the tests.
LinearSystem one_soliton(double lambda = 1.0, double c = 2.0);
LinearSystem multi_soliton(const std::vector<double>& lambdas);
LinearSystem three_soliton();
LinearSystem jordan_system();  // phi(x) = x^4 e^{-x}
LinearSystem random_scattering_system(std::mt19937_64& rng, int n, int m = 1);
LinearSystem random_diagonal_system(std::mt19937_64& rng, int n);

}  // namespace taulab::acceptance
