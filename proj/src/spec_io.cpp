#include "korn/spec_io.hpp"

#include <fstream>
#include <sstream>

#include "korn/catalog.hpp"
#include "korn/error.hpp"

namespace korn {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t byte = e.byte == 0 ? 0 : e.byte - 1;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    auto pos = what.find("] ");
    if (pos != std::string::npos) what = what.substr(pos + 2);
    pos = what.find(": ");
    if (what.rfind("parse error", 0) == 0 && pos != std::string::npos) what = what.substr(pos + 2);
    throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON syntax error: " + what);
  }
}

Json read_json_file(const std::string& path) { return parse_json_text(read_text_file(path), path); }

namespace {

int get_int(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("operator JSON: missing field '") + key + "'");
  if (!j[key].is_number_integer())
    throw ConfigError(std::string("operator JSON: field '") + key + "' must be an integer");
  return j[key].get<int>();
}

}  // namespace

OperatorSpec operator_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("operator JSON: top level must be an object");
  int n = get_int(j, "n");
  int dv = get_int(j, "dim_v");
  int dw = get_int(j, "dim_w");
  int k = get_int(j, "order");
  if (!j.contains("coeffs") || !j["coeffs"].is_array())
    throw ConfigError("operator JSON: 'coeffs' must be an array");
  if (j["coeffs"].empty()) throw ConfigError("operator JSON: 'coeffs' is empty");
  OperatorSpec::Coeffs c;
  std::size_t idx = 0;
  for (const auto& e : j["coeffs"]) {
    std::string where = "operator JSON: coeffs[" + std::to_string(idx++) + "]";
    if (!e.is_object() || !e.contains("alpha") || !e.contains("matrix"))
      throw ConfigError(where + ": needs 'alpha' and 'matrix'");
    MultiIndex a;
    try {
      a = e["alpha"].get<MultiIndex>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(where + ": 'alpha' must be an integer array");
    }
    if (static_cast<int>(a.size()) != n)
      throw ConfigError(where + ": alpha has length " + std::to_string(a.size()) + ", expected n=" +
                        std::to_string(n));
    if (degree(a) != k)
      throw ConfigError(where + ": |alpha| = " + std::to_string(degree(a)) + " but order is " +
                        std::to_string(k) + " (operator must be homogeneous)");
    const Json& m = e["matrix"];
    if (!m.is_array() || static_cast<int>(m.size()) != dw)
      throw ConfigError(where + ": matrix must have dim_w=" + std::to_string(dw) + " rows");
    Eigen::MatrixXd mat(dw, dv);
    for (int r = 0; r < dw; ++r) {
      if (!m[r].is_array() || static_cast<int>(m[r].size()) != dv)
        throw ConfigError(where + ": matrix row " + std::to_string(r) + " must have dim_v=" +
                          std::to_string(dv) + " entries");
      for (int col = 0; col < dv; ++col) {
        if (!m[r][col].is_number()) throw ConfigError(where + ": matrix entries must be numbers");
        mat(r, col) = m[r][col].get<double>();
      }
    }
    if (c.count(a)) throw ConfigError(where + ": duplicate alpha " + to_string(a));
    c.emplace(a, mat);
  }
  try {
    OperatorSpec spec(n, dv, dw, k, std::move(c), j.value("name", std::string()));
    if (spec.is_zero()) throw ConfigError("operator JSON: all coefficients are zero");
    return spec;
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("operator JSON: ") + e.what());
  }
}

Json operator_to_json(const OperatorSpec& a) {
  Json j;
  if (!a.name().empty()) j["name"] = a.name();
  j["n"] = a.n();
  j["dim_v"] = a.dim_v();
  j["dim_w"] = a.dim_w();
  j["order"] = a.order();
  Json coeffs = Json::array();
  for (auto& [al, m] : a.coeffs()) {
    Json rows = Json::array();
    for (int r = 0; r < m.rows(); ++r) {
      Json row = Json::array();
      for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    coeffs.push_back({{"alpha", al}, {"matrix", rows}});
  }
  j["coeffs"] = coeffs;
  return j;
}

OperatorSpec resolve_operator(const std::string& ref) {
  if (ref.rfind("catalog:", 0) == 0) return catalog_operator(ref).spec;
  return operator_from_json(read_json_file(ref));
}

Json classification_to_json(const Classification& c) {
  Json j;
  j["n"] = c.n;
  j["dim_v"] = c.dim_v;
  j["dim_w"] = c.dim_w;
  j["order"] = c.order;
  j["rank_min"] = c.rank_min;
  j["rank_max"] = c.rank_max;
  j["is_constant_rank"] = c.is_constant_rank;
  j["is_elliptic"] = c.is_elliptic;
  j["is_elliptic_system"] = c.is_elliptic_system;
  j["is_maximal_rank"] = c.is_maximal_rank;
  j["is_canceling"] = c.is_canceling;
  j["essential_range_dim"] = c.essential_range_dim;
  j["cancellation_dim"] = c.cancellation_dim;
  j["min_singular_on_sphere"] = c.min_singular_on_sphere;
  j["projector_variation"] = c.projector_variation;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["rank_tolerance"] = c.tolerance;
  j["verdict"] = "sampled";
  return j;
}

}  // namespace korn
