#include "slantlab/config.hpp"

#include "slantlab/error.hpp"
#include "slantlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace slantlab {

double RunConfig::tolerance_for(const CheckInfo& info) const {
  const auto it = tolerances.find(info.name);
  return it == tolerances.end() ? info.tolerance : it->second;
}

std::vector<const CheckInfo*> RunConfig::selected_checks() const {
  std::vector<const CheckInfo*> out;
  if (checks.empty()) {
    for (const auto& c : check_registry()) out.push_back(&c);
    return out;
  }
  for (const auto& name : checks) out.push_back(find_check(name));
  return out;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

/// Drops a trailing comment, respecting double quotes.
std::string strip_comment(const std::string& line, int lineno) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && (line[i] == ';' || line[i] == '#')) return line.substr(0, i);
  }
  if (quoted) throw ConfigError("unterminated quote", lineno);
  return line;
}

std::string unquote(const std::string& s, int lineno) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  if (s.find('"') != std::string::npos) throw ConfigError("stray quote in '" + s + "'", lineno);
  return s;
}

/// Comma-separated list; commas inside quotes or parentheses do not split.
std::vector<std::string> split_list(const std::string& s, int lineno) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  int depth = 0;
  for (char c : s) {
    if (c == '"') quoted = !quoted;
    if (!quoted && c == '(') ++depth;
    if (!quoted && c == ')') --depth;
    if (!quoted && depth == 0 && c == ',') {
      out.push_back(unquote(trim(cur), lineno));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  const std::string last = trim(cur);
  if (!last.empty() || !out.empty()) out.push_back(unquote(last, lineno));
  for (const auto& item : out)
    if (item.empty()) throw ConfigError("empty list item", lineno);
  return out;
}

double number(const std::string& s, int lineno) {
  try {
    return expr::parse_constant(s);
  } catch (const Error& e) {
    throw ConfigError("bad number '" + s + "': " + e.what(), lineno);
  }
}

long long integer(const std::string& s, int lineno) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ConfigError("expected an integer, got '" + s + "'", lineno);
  return v;
}

bool boolean(const std::string& s, int lineno) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ConfigError("expected true or false, got '" + s + "'", lineno);
}

struct KeyValue {
  std::string key;
  std::string raw;  // possibly quoted / list
  int line;
};

struct ChartSection {
  std::string name;
  int line = 0;
  std::vector<KeyValue> items;
};

ChartSpec resolve_chart(const ChartSection& sec) {
  ChartSpec spec;
  bool from_catalog = false;
  for (const auto& kv : sec.items)
    if (kv.key == "catalog") {
      try {
        spec = catalog_chart(unquote(kv.raw, kv.line));
      } catch (const Error& e) {
        throw ConfigError("chart '" + sec.name + "': " + e.what(), kv.line);
      }
      from_catalog = true;
    }
  spec.name = sec.name;
  std::optional<int> ambient_dim;
  std::optional<int> warp_base;
  std::optional<std::string> warp_expr;
  std::optional<std::vector<std::string>> fiber;
  int warp_line = sec.line;
  for (const auto& kv : sec.items) {
    const int ln = kv.line;
    if (kv.key == "catalog") continue;
    if (kv.key == "params") {
      spec.params = split_list(kv.raw, ln);
    } else if (kv.key == "components") {
      spec.components = split_list(kv.raw, ln);
    } else if (kv.key == "lower" || kv.key == "upper") {
      std::vector<double> v;
      for (const auto& s : split_list(kv.raw, ln)) v.push_back(number(s, ln));
      (kv.key == "lower" ? spec.lower : spec.upper) = v;
    } else if (kv.key == "grid") {
      spec.grid.clear();
      for (const auto& s : split_list(kv.raw, ln)) {
        const long long g = integer(s, ln);
        if (g < 2) throw ConfigError("chart '" + sec.name + "': grid resolution must be at least 2", ln);
        spec.grid.push_back(static_cast<int>(g));
      }
    } else if (kv.key == "ambient_dim") {
      ambient_dim = static_cast<int>(integer(unquote(kv.raw, ln), ln));
    } else if (kv.key == "basis") {
      const std::string b = unquote(kv.raw, ln);
      if (b == "standard") {
        spec.rotation.reset();
      } else if (b.rfind("rotated(", 0) == 0 && b.back() == ')') {
        spec.rotation = trim(b.substr(8, b.size() - 9));
      } else {
        throw ConfigError("basis must be 'standard' or 'rotated(<expression>)'", ln);
      }
    } else if (kv.key == "warp_base_dim") {
      warp_base = static_cast<int>(integer(unquote(kv.raw, ln), ln));
      warp_line = ln;
    } else if (kv.key == "warp") {
      warp_expr = unquote(kv.raw, ln);
      warp_line = ln;
    } else if (kv.key == "fiber") {
      fiber = split_list(kv.raw, ln);
      warp_line = ln;
    } else if (kv.key == "reverse_candidate") {
      spec.reverse_candidate = boolean(unquote(kv.raw, ln), ln);
    } else {
      throw ConfigError("unknown chart key '" + kv.key + "'", ln);
    }
  }
  if (warp_base || warp_expr || fiber) {
    if (!spec.warp && !(warp_base && warp_expr && fiber))
      throw ConfigError("chart '" + sec.name + "': warp needs warp_base_dim, warp and fiber", warp_line);
    WarpSpec w = spec.warp.value_or(WarpSpec{});
    if (warp_base) w.base_dim = *warp_base;
    if (warp_expr) w.warp = *warp_expr;
    if (fiber) w.fiber_components = *fiber;
    spec.warp = w;
  }
  if (!from_catalog && (spec.params.empty() || spec.components.empty() || spec.lower.empty() ||
                        spec.upper.empty() || spec.grid.empty()))
    throw ConfigError("chart '" + sec.name + "' needs catalog or params, components, lower, upper and grid",
                      sec.line);
  if (ambient_dim && *ambient_dim != static_cast<int>(spec.components.size()))
    throw ConfigError("chart '" + sec.name + "': ambient_dim " + std::to_string(*ambient_dim) + " but " +
                          std::to_string(spec.components.size()) + " components",
                      sec.line);
  for (int g : spec.grid)
    if (g < 2) throw ConfigError("chart '" + sec.name + "': grid resolution must be at least 2", sec.line);
  try {
    (void)build_chart(spec);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("chart '" + sec.name + "': " + e.what(), sec.line);
  }
  return spec;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  cfg.source = std::string(text);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  std::string section;
  std::vector<ChartSection> charts;
  std::set<std::string> seen_sections;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(strip_comment(line, lineno));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header", lineno);
      section = trim(s.substr(1, s.size() - 2));
      if (section.rfind("chart.", 0) == 0) {
        const std::string name = trim(section.substr(6));
        if (name.empty()) throw ConfigError("chart section without a name", lineno);
        if (name == kFrameLevelChart) throw ConfigError("chart name '" + name + "' is reserved", lineno);
        for (const auto& c : charts)
          if (c.name == name) throw ConfigError("duplicate chart name '" + name + "'", lineno);
        charts.push_back({name, lineno, {}});
      } else if (section == "run" || section == "tolerance") {
        if (!seen_sections.insert(section).second) throw ConfigError("duplicate section [" + section + "]", lineno);
      } else {
        throw ConfigError("unknown section [" + section + "]", lineno);
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", lineno);
    const std::string key = trim(s.substr(0, eq));
    const std::string raw = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    if (raw.empty()) throw ConfigError("empty value for '" + key + "'", lineno);
    if (section.empty()) throw ConfigError("key '" + key + "' outside a section", lineno);

    if (section == "run") {
      const std::string v = unquote(raw, lineno);
      if (key == "seed") {
        const auto* end = v.data() + v.size();
        const auto [p, ec] = std::from_chars(v.data(), end, cfg.seed);
        if (ec != std::errc() || p != end) throw ConfigError("seed must be a non-negative integer", lineno);
      } else if (key == "format") {
        if (v != "json" && v != "text") throw ConfigError("format must be json or text", lineno);
        cfg.format = v;
      } else if (key == "out") {
        cfg.out = v;
      } else if (key == "checks") {
        cfg.checks.clear();
        if (v == "all") continue;
        for (const auto& name : split_list(raw, lineno)) {
          if (!find_check(name)) throw ConfigError("unknown check '" + name + "'", lineno);
          cfg.checks.push_back(name);
        }
      } else if (key == "frame_level_instances" || key == "orthogonality_vectors") {
        const long long n = integer(v, lineno);
        if (n < 0 || n > 1000000) throw ConfigError(key + " out of range", lineno);
        (key == "frame_level_instances" ? cfg.global.frame_level_instances : cfg.global.orthogonality_vectors) =
            static_cast<int>(n);
      } else {
        throw ConfigError("unknown run key '" + key + "'", lineno);
      }
    } else if (section == "tolerance") {
      if (!find_check(key)) throw ConfigError("unknown check '" + key + "'", lineno);
      const double t = number(unquote(raw, lineno), lineno);
      if (!(t > 0)) throw ConfigError("tolerance must be positive", lineno);
      cfg.tolerances[key] = t;
    } else {
      charts.back().items.push_back({key, raw, lineno});
    }
  }
  for (const auto& sec : charts) cfg.charts.push_back(resolve_chart(sec));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace slantlab
