#include "fatou/cli/config.hpp"

#include <cmath>
#include <set>

namespace fatou::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "command", "blaschke", "polynomial", "base_point", "depth",       "method",     "grid",       "epsilon",
    "samples", "seed",     "viewport",   "resolution", "max_iter",    "overlay_depth", "output", "csv_output",
};

double finite_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + ": number is not finite");
  return v;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(where + ": integer out of range");
  return static_cast<int>(v);
}

Complex complex_value(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": expected [re, im]");
  return {finite_number(j[0], where + "[0]"), finite_number(j[1], where + "[1]")};
}

std::vector<Complex> complex_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + ": expected a list of [re, im] pairs");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_value(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, v] : obj.items()) {
    bool ok = false;
    for (auto key : keys) ok = ok || k == key;
    if (!ok) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json complex_list_json(const std::vector<Complex>& zs) {
  json a = json::array();
  for (auto z : zs) a.push_back(complex_json(z));
  return a;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [k, v] : doc.items())
    if (!kKnownKeys.count(k)) throw ConfigError("config: unknown key '" + k + "'");

  RunConfig c;
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) throw ConfigError("command: expected a string");
    c.command = doc["command"].get<std::string>();
  }

  const bool has_b = doc.contains("blaschke");
  const bool has_p = doc.contains("polynomial");
  if (has_b == has_p) throw ConfigError("config: exactly one of 'blaschke' or 'polynomial' is required");
  if (has_b) {
    const json& b = doc["blaschke"];
    if (!b.is_object()) throw ConfigError("blaschke: expected an object");
    only_keys(b, {"theta", "zeros"}, "blaschke");
    BlaschkeSpec spec;
    if (b.contains("theta")) spec.theta = finite_number(b["theta"], "blaschke.theta");
    if (!b.contains("zeros")) throw ConfigError("blaschke.zeros: required");
    spec.zeros = complex_list(b["zeros"], "blaschke.zeros");
    c.map = spec;
  } else {
    const json& p = doc["polynomial"];
    if (!p.is_object()) throw ConfigError("polynomial: expected an object");
    only_keys(p, {"coefficients"}, "polynomial");
    if (!p.contains("coefficients")) throw ConfigError("polynomial.coefficients: required");
    c.map = PolynomialSpec{complex_list(p["coefficients"], "polynomial.coefficients")};
  }

  if (doc.contains("base_point")) c.base_point = complex_value(doc["base_point"], "base_point");
  if (doc.contains("depth")) {
    c.depth = integer(doc["depth"], "depth");
    if (*c.depth < 0) throw ConfigError("depth: must be non-negative");
  }
  if (doc.contains("method")) {
    if (!doc["method"].is_string()) throw ConfigError("method: expected a string");
    c.method = doc["method"].get<std::string>();
    if (c.method != "tree" && c.method != "power_map") throw ConfigError("method: expected 'tree' or 'power_map'");
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object()) throw ConfigError("grid: expected an object");
    only_keys(g, {"i_max", "angles", "points"}, "grid");
    GridSpec spec;
    if (g.contains("points")) {
      if (g.contains("i_max") || g.contains("angles")) throw ConfigError("grid: give either points or i_max/angles");
      spec.points = complex_list(g["points"], "grid.points");
      if (spec.points.empty()) throw ConfigError("grid.points: must not be empty");
    } else {
      if (!g.contains("i_max") || !g.contains("angles")) throw ConfigError("grid: i_max and angles are required");
      spec.i_max = integer(g["i_max"], "grid.i_max");
      spec.angles = integer(g["angles"], "grid.angles");
      if (spec.i_max < 1) throw ConfigError("grid.i_max: must be >= 1");
      if (spec.angles < 8) throw ConfigError("grid.angles: must be >= 8");
    }
    c.grid = spec;
  }
  if (doc.contains("epsilon")) c.epsilon = finite_number(doc["epsilon"], "epsilon");
  if (doc.contains("samples")) {
    c.samples = integer(doc["samples"], "samples");
    if (c.samples < 1) throw ConfigError("samples: must be positive");
  }
  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (s.is_number_unsigned()) c.seed = s.get<std::uint64_t>();
    else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) c.seed = static_cast<std::uint64_t>(s.get<std::int64_t>());
    else throw ConfigError("seed: expected a non-negative 64-bit integer");
  }
  if (doc.contains("viewport")) {
    const json& v = doc["viewport"];
    if (!v.is_object()) throw ConfigError("viewport: expected an object");
    only_keys(v, {"center", "width", "height"}, "viewport");
    if (!v.contains("center") || !v.contains("width") || !v.contains("height"))
      throw ConfigError("viewport: center, width and height are required");
    c.viewport = ViewportSpec{complex_value(v["center"], "viewport.center"), finite_number(v["width"], "viewport.width"),
                              finite_number(v["height"], "viewport.height")};
  }
  if (doc.contains("resolution")) {
    const json& r = doc["resolution"];
    if (!r.is_array() || r.size() != 2) throw ConfigError("resolution: expected [width, height]");
    c.resolution = std::pair{integer(r[0], "resolution[0]"), integer(r[1], "resolution[1]")};
  }
  if (doc.contains("max_iter")) {
    c.max_iter = integer(doc["max_iter"], "max_iter");
    if (c.max_iter < 0) throw ConfigError("max_iter: must be non-negative");
  }
  if (doc.contains("overlay_depth")) {
    c.overlay_depth = integer(doc["overlay_depth"], "overlay_depth");
    if (*c.overlay_depth < 0) throw ConfigError("overlay_depth: must be non-negative");
  }
  for (const char* key : {"output", "csv_output"}) {
    if (!doc.contains(key)) continue;
    if (!doc[key].is_string()) throw ConfigError(std::string(key) + ": expected a string");
    (std::string(key) == "output" ? c.output : c.csv_output) = doc[key].get<std::string>();
  }
  return c;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& c) {
  json doc = json::object();
  if (!c.command.empty()) doc["command"] = c.command;
  if (const auto* b = std::get_if<BlaschkeSpec>(&c.map)) {
    doc["blaschke"] = {{"theta", b->theta}, {"zeros", complex_list_json(b->zeros)}};
  } else {
    doc["polynomial"] = {{"coefficients", complex_list_json(std::get<PolynomialSpec>(c.map).coefficients)}};
  }
  if (c.base_point) doc["base_point"] = complex_json(*c.base_point);
  if (c.depth) doc["depth"] = *c.depth;
  doc["method"] = c.method;
  if (c.grid) {
    if (c.grid->points.empty()) doc["grid"] = {{"i_max", c.grid->i_max}, {"angles", c.grid->angles}};
    else doc["grid"] = {{"points", complex_list_json(c.grid->points)}};
  }
  doc["epsilon"] = c.epsilon;
  doc["samples"] = c.samples;
  doc["seed"] = c.seed;
  if (c.viewport)
    doc["viewport"] = {{"center", complex_json(c.viewport->center)},
                       {"width", c.viewport->width},
                       {"height", c.viewport->height}};
  if (c.resolution) doc["resolution"] = json::array({c.resolution->first, c.resolution->second});
  doc["max_iter"] = c.max_iter;
  if (c.overlay_depth) doc["overlay_depth"] = *c.overlay_depth;
  if (!c.output.empty()) doc["output"] = c.output;
  if (!c.csv_output.empty()) doc["csv_output"] = c.csv_output;
  return doc;
}

}  // namespace fatou::cli
