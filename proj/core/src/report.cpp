#include "taulab/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace taulab {

void ResidualReport::push(double where, double value) {
  grid.push_back(where);
  residuals.push_back(value);
  if (!(value <= max)) max = value;  // NaN propagates into max
}

void ResidualReport::merge(const ResidualReport& other) {
  grid.insert(grid.end(), other.grid.begin(), other.grid.end());
  residuals.insert(residuals.end(), other.residuals.begin(), other.residuals.end());
  if (!(other.max <= max)) max = other.max;
  if (std::isnan(order_estimate)) {
    order_estimate = other.order_estimate;
  } else if (!std::isnan(other.order_estimate)) {
    order_estimate = std::min(order_estimate, other.order_estimate);
  }
}

double convergence_order(double coarse, double fine, double ratio) {
  if (coarse <= 0.0 || fine <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::log(coarse / fine) / std::log(ratio);
}

namespace {
nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}
}  // namespace

std::string to_json(const ResidualReport& r) {
  nlohmann::json j;
  j["grid"] = r.grid;
  nlohmann::json res = nlohmann::json::array();
  for (double v : r.residuals) res.push_back(number(v));
  j["residuals"] = res;
  j["max"] = number(r.max);
  j["order_estimate"] = number(r.order_estimate);
  return j.dump();
}

std::string to_csv(const ResidualReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "x,residual\n";
  for (std::size_t i = 0; i < r.grid.size(); ++i) os << r.grid[i] << ',' << r.residuals[i] << '\n';
  return os.str();
}

}  // namespace taulab
