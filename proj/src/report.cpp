#include "slantlab/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace slantlab {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
    case Status::NonConforming: return "non-conforming";
  }
  return "?";
}

Entry Entry::measured(std::string check, int point, double residual, double tolerance) {
  Entry e;
  e.check = std::move(check);
  e.point = point;
  e.residual = residual;
  e.tolerance = tolerance;
  e.status = residual <= tolerance ? Status::Pass : Status::Fail;
  return e;
}

Entry Entry::skipped(std::string check, int point, std::string reason) {
  Entry e;
  e.check = std::move(check);
  e.point = point;
  e.status = Status::Skipped;
  e.note = std::move(reason);
  return e;
}

void Report::normalize() {
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.chart != b.chart) return a.chart < b.chart;
    if (a.check != b.check) return a.check < b.check;
    return a.point < b.point;
  });
}

bool Report::any_fail() const {
  return std::any_of(entries.begin(), entries.end(), [](const Entry& e) { return e.status == Status::Fail; });
}

bool Report::any_skipped_or_nonconforming() const {
  return std::any_of(entries.begin(), entries.end(), [](const Entry& e) {
    return e.status == Status::Skipped || e.status == Status::NonConforming;
  });
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void json_string(std::ostringstream& os, std::string_view s) {
  os << '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      case '\r': os << "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          os << buf;
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

// JSON has no NaN/Infinity literals; non-finite values become null.
void json_number(std::ostringstream& os, std::optional<double> v) {
  if (!v || !std::isfinite(*v))
    os << "null";
  else
    os << format_double(*v);
}

}  // namespace

std::string to_json(const Report& report) {
  std::ostringstream os;
  os << "{\n  \"config_hash\": ";
  json_string(os, report.config_hash);
  os << ",\n  \"seed\": " << report.seed << ",\n  \"entries\": [";
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const Entry& e = report.entries[i];
    os << (i ? ",\n" : "\n") << "    {\"chart\": ";
    json_string(os, e.chart);
    os << ", \"check\": ";
    json_string(os, e.check);
    os << ", \"point\": " << e.point << ", \"status\": ";
    json_string(os, to_string(e.status));
    os << ", \"residual\": ";
    json_number(os, e.residual);
    os << ", \"tolerance\": ";
    json_number(os, e.tolerance);
    os << ", \"labels\": [";
    for (std::size_t k = 0; k < e.labels.size(); ++k) {
      if (k) os << ", ";
      json_string(os, e.labels[k]);
    }
    os << "], \"theta\": {\"I\": ";
    json_number(os, e.theta[0]);
    os << ", \"J\": ";
    json_number(os, e.theta[1]);
    os << ", \"K\": ";
    json_number(os, e.theta[2]);
    os << "}";
    if (!e.note.empty()) {
      os << ", \"note\": ";
      json_string(os, e.note);
    }
    os << "}";
  }
  os << (report.entries.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

std::string to_text(const Report& report) {
  std::ostringstream os;
  os << "config " << report.config_hash << "  seed " << report.seed << "\n";
  std::map<std::string, std::array<int, 4>> tally;
  for (const Entry& e : report.entries) {
    ++tally[e.chart + " / " + e.check][static_cast<int>(e.status)];
    if (e.status == Status::Pass) continue;
    os << to_string(e.status) << "  " << e.chart << "  " << e.check << "  point " << e.point;
    if (e.residual) os << "  residual " << format_double(*e.residual) << " (tol " << format_double(e.tolerance) << ")";
    if (!e.note.empty()) os << "  " << e.note;
    os << "\n";
  }
  os << "\nsummary (pass / fail / skipped / non-conforming)\n";
  for (const auto& [key, t] : tally)
    os << "  " << key << ": " << t[0] << " / " << t[1] << " / " << t[2] << " / " << t[3] << "\n";
  return os.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

}  // namespace slantlab
