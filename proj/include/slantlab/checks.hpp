#pragma once

// Named checks turning the geometric identities into report entries.

#include "slantlab/geometry.hpp"
#include "slantlab/report.hpp"
#include "slantlab/slant.hpp"
#include "slantlab/warped.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace slantlab {

enum class CheckScope {
  Point,   // one entry per grid point
  Chart,   // one entry per chart (point = -1)
  Global,  // entries under the pseudo-chart "frame_level"
};

enum class CheckTarget { AnyChart, WarpedChart, ReverseCandidate, None };

struct CheckInfo {
  std::string name;
  double tolerance;
  CheckScope scope;
  CheckTarget target;
  std::string summary;
};

const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(std::string_view name);

inline constexpr const char* kFrameLevelChart = "frame_level";

/// A chart prepared for checking.
struct ChartUnderTest {
  std::string name;
  std::shared_ptr<const ImmersionChart> chart;
  std::shared_ptr<const WarpedChart> warped;  // warped and reverse candidates
  bool reverse_candidate = false;
  std::vector<Vec> grid;
};

/// Shared per-point state: geometry with the second fundamental form and the
/// slant analysis.  `error` is set when the point could not be analyzed.
struct PointState {
  int index = 0;
  Vec x;
  std::optional<PointGeometry> pg;
  std::optional<SlantAnalysis> sa;
  std::string error;
};

PointState prepare_point(const ChartUnderTest& cut, int index);

/// Runs one point-scope check.  The entry's chart, labels and theta fields
/// are filled in by the caller.
Entry run_point_check(const CheckInfo& info, double tolerance, const ChartUnderTest& cut, const PointState& ps,
                      std::uint64_t seed);

/// Runs one chart-scope check.
Entry run_chart_check(const CheckInfo& info, double tolerance, const ChartUnderTest& cut, std::uint64_t seed);

struct GlobalOptions {
  int frame_level_instances = 100;
  int orthogonality_vectors = 100;
};

/// Runs a global check; entries carry the chart name "frame_level".
std::vector<Entry> run_global_check(const CheckInfo& info, double tolerance, const GlobalOptions& opts,
                                    std::uint64_t seed);

/// Labels and slant angles attached to point entries.
void annotate(Entry& e, const PointState& ps);

}  // namespace slantlab
