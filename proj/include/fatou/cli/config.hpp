#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fatou/types.hpp"

namespace fatou::cli {

/// Malformed or schema-violating run configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File system failure while reading or writing artifacts (exit code 5).
class IoError : public Error {
 public:
  using Error::Error;
};

struct BlaschkeSpec {
  double theta = 0.0;
  std::vector<Complex> zeros;
  bool operator==(const BlaschkeSpec&) const = default;
};

struct PolynomialSpec {
  std::vector<Complex> coefficients;  ///< ascending powers
  bool operator==(const PolynomialSpec&) const = default;
};

struct GridSpec {
  int i_max = 0;  ///< shell layout when > 0
  int angles = 0;
  std::vector<Complex> points;  ///< explicit samples otherwise
  bool operator==(const GridSpec&) const = default;
};

struct ViewportSpec {
  Complex center;
  double width = 0.0;
  double height = 0.0;
  bool operator==(const ViewportSpec&) const = default;
};

/// One run of the command-line tool, as read from a JSON document.
/// Complex numbers are two-element arrays [re, im].
struct RunConfig {
  std::string command;
  std::variant<BlaschkeSpec, PolynomialSpec> map;
  std::optional<Complex> base_point;
  std::optional<int> depth;
  std::string method = "tree";
  std::optional<GridSpec> grid;
  double epsilon = 0.01;
  int samples = 10000;
  std::uint64_t seed = 0;
  std::optional<ViewportSpec> viewport;
  std::optional<std::pair<int, int>> resolution;
  int max_iter = 10000;
  std::optional<int> overlay_depth;
  std::string output;
  std::string csv_output;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
nlohmann::json to_json(const RunConfig& config);

}  // namespace fatou::cli
