#pragma once

// JSON run configuration for the tpa-flip command line tool.
//
//   {
//     "version": 1,
//     "levels": [ {"nu": 1.0, "gamma": 0.05, "c_re": 1.0, "c_im": 0.0} ],
//     "bandwidth": 4.0,
//     "flips": [1.0],
//     "scan": {"min": 0.0, "max": 2.0, "points": 1000},
//     "quadrature": {"rel_tol": 1e-10, "abs_tol": 1e-14, "max_subdivisions": 1000000},
//     "unit_scale": 1.0,
//     "output": "out.csv"
//   }
//
// Every frequency (nu, gamma, bandwidth, flips, scan bounds) is multiplied by
// unit_scale once, when the model objects are built. Unknown keys are errors.

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpaflip/quadrature.hpp"
#include "tpaflip/scan.hpp"
#include "tpaflip/spectral_model.hpp"

namespace tpaflip::cli {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LevelConfig {
  double nu = 0.0;
  double gamma = 0.0;
  double c_re = 1.0;
  double c_im = 0.0;

  friend bool operator==(const LevelConfig&, const LevelConfig&) = default;
};

struct GridConfig {
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 0;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct RunConfig {
  std::vector<LevelConfig> levels;
  std::optional<double> bandwidth;
  std::vector<double> flips;
  std::optional<GridConfig> scan;
  QuadratureSettings quadrature;
  double unit_scale = 1.0;
  std::optional<std::string> output;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  bool has_model() const noexcept { return !levels.empty() && bandwidth.has_value(); }

  LevelStructure level_structure() const {
    std::vector<IntermediateLevel> out;
    for (const auto& l : levels) out.emplace_back(l.nu * unit_scale, l.gamma * unit_scale, complex{l.c_re, l.c_im});
    return {std::move(out)};
  }

  double scaled_bandwidth() const { return bandwidth.value() * unit_scale; }

  InputSpectrum input_spectrum() const {
    std::vector<double> f(flips);
    for (double& x : f) x *= unit_scale;
    return InputSpectrum(scaled_bandwidth(), std::move(f));
  }

  ScanGrid scan_grid() const {
    if (!scan) throw config_error("no scan grid given (config \"scan\" or --grid)");
    return {scan->min * unit_scale, scan->max * unit_scale, scan->points};
  }

  /// Checks every model invariant; throws config_error naming the field.
  void validate() const {
    if (!(unit_scale > 0.0) || !std::isfinite(unit_scale)) throw config_error("unit_scale must be a finite value > 0");
    for (std::size_t m = 0; m < levels.size(); ++m) {
      try {
        IntermediateLevel(levels[m].nu * unit_scale, levels[m].gamma * unit_scale, complex{levels[m].c_re, levels[m].c_im});
      } catch (const invalid_parameter& e) {
        throw config_error("levels[" + std::to_string(m) + "]: " + e.what());
      }
    }
    try {
      quadrature.validate();
      if (bandwidth) {
        input_spectrum();
        if (scan) scan_grid().check_within(scaled_bandwidth());
      } else if (!flips.empty() || scan) {
        throw config_error("flips/scan require \"bandwidth\"");
      }
      if (scan) scan_grid();
    } catch (const invalid_parameter& e) {
      throw config_error(e.what());
    }
  }
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) throw config_error("unknown key \"" + key + "\" in " + where);
  }
}

inline const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw config_error(where + " must be a JSON object");
  return j;
}

inline double get_number(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw config_error("missing \"" + std::string(key) + "\" in " + where);
  if (!it->is_number()) throw config_error("\"" + std::string(key) + "\" in " + where + " must be a number");
  return it->get<double>();
}

inline double get_number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

inline std::size_t get_count(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw config_error("missing \"" + std::string(key) + "\" in " + where);
  if (!it->is_number_unsigned()) throw config_error("\"" + std::string(key) + "\" in " + where + " must be a non-negative integer");
  return it->get<std::size_t>();
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& root) {
  using detail::get_number;
  detail::require_object(root, "config");
  detail::reject_unknown(root, {"version", "levels", "bandwidth", "flips", "scan", "quadrature", "unit_scale", "output"},
                         "config");
  if (!root.contains("version") || !root["version"].is_number_integer() || root["version"].get<int>() != 1)
    throw config_error("config \"version\" must be 1");

  RunConfig cfg;
  if (root.contains("levels")) {
    const auto& levels = root["levels"];
    if (!levels.is_array() || levels.empty()) throw config_error("\"levels\" must be a nonempty array");
    for (std::size_t m = 0; m < levels.size(); ++m) {
      const std::string where = "levels[" + std::to_string(m) + "]";
      const auto& l = detail::require_object(levels[m], where);
      detail::reject_unknown(l, {"nu", "gamma", "c_re", "c_im"}, where);
      cfg.levels.push_back({get_number(l, "nu", where), get_number(l, "gamma", where),
                            detail::get_number_or(l, "c_re", 1.0, where), detail::get_number_or(l, "c_im", 0.0, where)});
    }
  }
  if (root.contains("bandwidth")) cfg.bandwidth = get_number(root, "bandwidth", "config");
  if (root.contains("flips")) {
    const auto& flips = root["flips"];
    if (!flips.is_array()) throw config_error("\"flips\" must be an array of numbers");
    for (const auto& f : flips) {
      if (!f.is_number()) throw config_error("\"flips\" must be an array of numbers");
      cfg.flips.push_back(f.get<double>());
    }
  }
  if (root.contains("scan")) {
    const auto& s = detail::require_object(root["scan"], "scan");
    detail::reject_unknown(s, {"min", "max", "points"}, "scan");
    cfg.scan = GridConfig{get_number(s, "min", "scan"), get_number(s, "max", "scan"), detail::get_count(s, "points", "scan")};
  }
  if (root.contains("quadrature")) {
    const auto& q = detail::require_object(root["quadrature"], "quadrature");
    detail::reject_unknown(q, {"rel_tol", "abs_tol", "max_subdivisions"}, "quadrature");
    cfg.quadrature.rel_tol = detail::get_number_or(q, "rel_tol", cfg.quadrature.rel_tol, "quadrature");
    cfg.quadrature.abs_tol = detail::get_number_or(q, "abs_tol", cfg.quadrature.abs_tol, "quadrature");
    if (q.contains("max_subdivisions")) cfg.quadrature.max_subdivisions = detail::get_count(q, "max_subdivisions", "quadrature");
  }
  if (root.contains("unit_scale")) cfg.unit_scale = get_number(root, "unit_scale", "config");
  if (root.contains("output")) {
    if (!root["output"].is_string()) throw config_error("\"output\" must be a string");
    cfg.output = root["output"].get<std::string>();
  }
  cfg.validate();
  return cfg;
}

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(root);
}

inline RunConfig parse_config(const char* text) { return parse_config(std::string(text)); }

inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["version"] = 1;
  if (!cfg.levels.empty()) {
    j["levels"] = nlohmann::json::array();
    for (const auto& l : cfg.levels)
      j["levels"].push_back({{"nu", l.nu}, {"gamma", l.gamma}, {"c_re", l.c_re}, {"c_im", l.c_im}});
  }
  if (cfg.bandwidth) j["bandwidth"] = *cfg.bandwidth;
  if (!cfg.flips.empty()) j["flips"] = cfg.flips;
  if (cfg.scan) j["scan"] = {{"min", cfg.scan->min}, {"max", cfg.scan->max}, {"points", cfg.scan->points}};
  j["quadrature"] = {{"rel_tol", cfg.quadrature.rel_tol},
                     {"abs_tol", cfg.quadrature.abs_tol},
                     {"max_subdivisions", cfg.quadrature.max_subdivisions}};
  j["unit_scale"] = cfg.unit_scale;
  if (cfg.output) j["output"] = *cfg.output;
  return j;
}

/// Parses "min:max:points".
inline GridConfig parse_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (a == std::string::npos || b == std::string::npos) throw config_error("--grid must be min:max:points");
  try {
    std::size_t used = 0;
    GridConfig g;
    g.min = std::stod(text.substr(0, a), &used);
    if (used != a) throw std::invalid_argument("min");
    const std::string max_text = text.substr(a + 1, b - a - 1);
    g.max = std::stod(max_text, &used);
    if (used != max_text.size()) throw std::invalid_argument("max");
    const std::string pts = text.substr(b + 1);
    if (pts.empty() || pts.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument("points");
    g.points = std::stoull(pts);
    return g;
  } catch (const std::exception&) {
    throw config_error("--grid must be min:max:points, got \"" + text + "\"");
  }
}

}  // namespace tpaflip::cli
