#include "taulab/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "taulab/errors.hpp"

namespace taulab::io {

using nlohmann::json;

namespace {

cplx parse_entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw InvalidArgument("matrix entry must be a number or an [re, im] pair");
}

CMat parse_matrix(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(std::string("field '") + name + "' must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw InvalidArgument(std::string("field '") + name + "' rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMat M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw InvalidArgument(std::string("field '") + name + "' is ragged");
    for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = parse_entry(row[static_cast<std::size_t>(c)]);
  }
  return M;
}

json dump_matrix(const CMat& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back({M(r, c).real(), M(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

LinearSystem system_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("system JSON: ") + e.what());
  }
  for (const char* key : {"A", "B", "C"})
    if (!j.contains(key)) throw InvalidArgument(std::string("system JSON lacks field '") + key + "'");
  bool scattering = false;
  if (j.contains("flags")) {
    for (const auto& f : j["flags"])
      if (f.is_string() && f.get<std::string>() == "scattering") scattering = true;
  }
  return LinearSystem::make(parse_matrix(j["A"], "A"), parse_matrix(j["B"], "B"),
                            parse_matrix(j["C"], "C"), scattering);
}

std::string system_to_json(const LinearSystem& sys) {
  json j;
  j["A"] = dump_matrix(sys.A());
  j["B"] = dump_matrix(sys.B());
  j["C"] = dump_matrix(sys.C());
  j["flags"] = sys.scattering_class() ? json::array({"scattering"}) : json::array();
  return j.dump(2);
}

LinearSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open system file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return system_from_json(ss.str());
}

}  // namespace taulab::io
