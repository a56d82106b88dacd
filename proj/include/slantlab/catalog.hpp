#pragma once

// Built-in charts and the textual chart description shared with configs.

#include "slantlab/checks.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slantlab {

struct WarpSpec {
  int base_dim = 0;
  std::string warp;                         // over all chart parameters
  std::vector<std::string> fiber_components;  // over the fiber parameters
};

/// Everything needed to build a chart; expressions stay as source text so
/// that configs can override single fields.
struct ChartSpec {
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> components;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> grid;  // points per axis
  std::optional<std::string> rotation;  // angle f over y1..y4m; rotated basis when set
  std::optional<WarpSpec> warp;
  bool reverse_candidate = false;
};

/// Parses expressions, builds the basis and the grid.  Throws the
/// expression errors, InvalidDimension or ContractViolation.
ChartUnderTest build_chart(const ChartSpec& spec);

struct CatalogInfo {
  std::string name;
  std::string summary;
  std::vector<std::pair<std::string, std::string>> defaults;  // name(key=value) parameters
};

const std::vector<CatalogInfo>& catalog();

/// Resolves "name" or "name(key=value, ...)"; values are constant
/// expressions such as pi/3.  Throws UnknownIdentifier / ParseError.
ChartSpec catalog_chart(std::string_view call);

/// The chart names used by the shipped full-catalog config.
std::vector<std::string> catalog_names();

}  // namespace slantlab
