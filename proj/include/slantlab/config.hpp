#pragma once

// Run configuration: a line-oriented key = value format with [section]
// headers.
//
//   [run]                  seed, format (json|text), out, checks (comma list or "all"),
//                          frame_level_instances, orthogonality_vectors
//   [tolerance]            <check> = <value>
//   [chart.NAME]           catalog = <call>   and/or   params, components, lower, upper,
//                          grid, ambient_dim, basis (standard | rotated(<f over y>)),
//                          warp_base_dim, warp, fiber, reverse_candidate
//
// Values may be double-quoted; ';' and '#' start comments outside quotes.

#include "slantlab/catalog.hpp"
#include "slantlab/checks.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace slantlab {

struct RunConfig {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;                  // empty: stdout
  std::vector<std::string> checks;  // empty: every registered check
  std::map<std::string, double> tolerances;
  GlobalOptions global;
  std::vector<ChartSpec> charts;
  std::string source;  // text the config hash is taken over

  double tolerance_for(const CheckInfo& info) const;
  std::vector<const CheckInfo*> selected_checks() const;
};

/// Parses and validates; every chart is built once so expression and
/// dimension errors surface here.  Throws ConfigError with the line number.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace slantlab
