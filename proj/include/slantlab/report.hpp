#pragma once

// Check results and their JSON / text renderings.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace slantlab {

enum class Status { Pass, Fail, Skipped, NonConforming };

std::string_view to_string(Status s);

/// Point index used for entries that summarize a whole chart.
inline constexpr int kChartLevel = -1;

struct Entry {
  std::string chart;
  std::string check;
  int point = kChartLevel;
  Status status = Status::Pass;
  std::optional<double> residual;
  double tolerance = 0.0;
  std::vector<std::string> labels;
  std::array<std::optional<double>, 3> theta{};
  std::string note;

  /// Pass when residual <= tolerance, fail otherwise.
  static Entry measured(std::string check, int point, double residual, double tolerance);
  static Entry skipped(std::string check, int point, std::string reason);
};

struct Report {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::vector<Entry> entries;

  /// Orders entries by (chart, check, point).
  void normalize();
  bool any_fail() const;
  bool any_skipped_or_nonconforming() const;
};

std::string to_json(const Report& report);
std::string to_text(const Report& report);

/// Hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

/// %.17g rendering used for every number in reports.
std::string format_double(double v);

}  // namespace slantlab
