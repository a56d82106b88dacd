#include "slantlab/catalog.hpp"

#include "slantlab/error.hpp"
#include "slantlab/expr.hpp"

#include <cctype>
#include <cstdio>
#include <functional>
#include <map>

namespace slantlab {

ChartUnderTest build_chart(const ChartSpec& spec) {
  const int n = static_cast<int>(spec.params.size());
  const int amb = static_cast<int>(spec.components.size());
  if (amb == 0 || amb % 4 != 0)
    throw InvalidDimension("chart '" + spec.name + "': ambient dimension " + std::to_string(amb) +
                           " is not a positive multiple of 4");
  if (static_cast<int>(spec.lower.size()) != n || static_cast<int>(spec.upper.size()) != n)
    throw InvalidDimension("chart '" + spec.name + "': domain bounds need " + std::to_string(n) + " entries");
  std::vector<int> resolution = spec.grid;
  if (resolution.size() == 1) resolution.assign(n, resolution[0]);
  if (static_cast<int>(resolution.size()) != n)
    throw InvalidDimension("chart '" + spec.name + "': grid needs 1 or " + std::to_string(n) + " entries");

  auto basis = std::make_shared<QuaternionicBasis>(QuaternionicBasis::standard(amb / 4));
  if (spec.rotation) {
    const auto f = expr::parse(*spec.rotation, expr::numbered_params("y", amb));
    basis = std::make_shared<QuaternionicBasis>(QuaternionicBasis::rotated(*basis, AngleField::from_expression(f)));
  }
  ParameterBox box{Eigen::Map<const Vec>(spec.lower.data(), n), Eigen::Map<const Vec>(spec.upper.data(), n)};
  for (int i = 0; i < n; ++i)
    if (!(box.lower[i] <= box.upper[i]))
      throw ContractViolation("chart '" + spec.name + "': lower bound exceeds upper bound on axis " +
                              std::to_string(i + 1));

  ChartUnderTest cut;
  cut.name = spec.name;
  cut.chart = std::make_shared<ImmersionChart>(
      ImmersionChart::from_sources(spec.name, spec.params, spec.components, box, basis));
  cut.grid = grid_points(box, resolution);
  cut.reverse_candidate = spec.reverse_candidate;
  if (spec.warp) {
    const WarpSpec& w = *spec.warp;
    if (w.base_dim < 1 || w.base_dim >= n)
      throw InvalidDimension("chart '" + spec.name + "': warp base dimension must lie in [1, n)");
    const std::vector<std::string> fiber_params(spec.params.begin() + w.base_dim, spec.params.end());
    std::vector<expr::Expression> fiber;
    for (const auto& src : w.fiber_components) fiber.push_back(expr::parse(src, fiber_params));
    cut.warped = std::make_shared<WarpedChart>(
        WarpedChart{*cut.chart, w.base_dim, expr::parse(w.warp, spec.params), std::move(fiber)});
  }
  return cut;
}

namespace {

using Values = std::map<std::string, double>;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  return v < 0 ? "(" + s + ")" : s;
}

/// Replaces {key} by the parameter value.
std::string sub(std::string text, const Values& v) {
  for (const auto& [key, value] : v) {
    const std::string pat = "{" + key + "}";
    for (std::size_t pos; (pos = text.find(pat)) != std::string::npos;) text.replace(pos, pat.size(), num(value));
  }
  return text;
}

std::vector<std::string> sub_all(std::vector<std::string> texts, const Values& v) {
  for (auto& t : texts) t = sub(t, v);
  return texts;
}

// Components of a curved surface in R^4 with a proper, non-constant slant angle.
std::vector<std::string> curved_surface(const std::string& a, const std::string& b) {
  return {a, "0.6*" + b + " + 0.2*" + a + "^2", "0.5*" + b + " + 0.1*" + b + "^2",
          "0.6*" + b + " - 0.15*" + a + "*" + b};
}

// Complex curve for L = (I + J + K)/sqrt(3): every slant angle is arccos(1/sqrt(3)).
std::vector<std::string> holomorphic_curve(const std::string& a, const std::string& b) {
  const std::string re = "0.3*(" + a + "^2 - " + b + "^2)/sqrt(2)";
  const std::string im = "0.6*" + a + "*" + b + "/sqrt(6)";
  return {a, b + "/sqrt(3) + " + re + " + " + im, b + "/sqrt(3) - " + re + " + " + im,
          b + "/sqrt(3) - 2*" + im};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

struct Builtin {
  CatalogInfo info;
  std::function<ChartSpec(const Values&)> make;
};

ChartSpec spec(std::vector<std::string> params, std::vector<std::string> components, std::vector<double> lower,
               std::vector<double> upper, int grid) {
  ChartSpec s;
  s.params = std::move(params);
  s.components = std::move(components);
  s.lower = std::move(lower);
  s.upper = std::move(upper);
  s.grid = {grid};
  return s;
}

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table = {
      {{"example_7_5", "R^4 in R^8, (0,0,x3,x1,0,x4,x2,0); almost h-semi-slant with per-structure splits", {}},
       [](const Values&) {
         return spec(expr::numbered_params("x", 4), {"0", "0", "x3", "x1", "0", "x4", "x2", "0"}, {-1, -1, -1, -1},
                     {1, 1, 1, 1}, 3);
       }},
      {{"example_7_6",
        "R^6 in R^8, (0,0,x4,x1,x5,x2,x6,x3) over the basis rotated by f = y3, or by a constant angle",
        {{"angle", "none"}}},
       [](const Values& v) {
         ChartSpec s = spec(expr::numbered_params("x", 6), {"0", "0", "x4", "x1", "x5", "x2", "x6", "x3"},
                            {-1, -1, -1, 0.2, -1, -1}, {1, 1, 1, 1.2, 1, 1}, 2);
         s.rotation = v.count("angle") ? num(v.at("angle")) : "y3";
         return s;
       }},
      {{"slant_plane", "plane (x1, x2 cos a, x2 sin a, 0) in R^4, slant angle a for I", {{"alpha", "pi/3"}}},
       [](const Values& v) {
         return spec({"x1", "x2"}, sub_all({"x1", "x2*cos({alpha})", "x2*sin({alpha})", "0"}, v), {-1, -1}, {1, 1},
                     6);
       }},
      {{"circle", "circle of radius r in the (y1, y2) plane", {{"r", "1"}}},
       [](const Values& v) {
         return spec({"x1"}, sub_all({"{r}*cos(x1)", "{r}*sin(x1)", "0", "0"}, v), {0}, {3}, 27);
       }},
      {{"sphere_patch", "patch of the unit 2-sphere in the first three coordinates", {}},
       [](const Values&) {
         return spec({"x1", "x2"}, {"cos(x1)*cos(x2)", "cos(x1)*sin(x2)", "sin(x1)", "0"}, {-0.5, 0}, {0.5, 1.5}, 6);
       }},
      {{"sphere_s3", "patch of the unit 3-sphere in R^4; totally umbilic, D1 of dimension 2 per structure", {}},
       [](const Values&) {
         return spec({"x1", "x2", "x3"},
                     {"cos(x1)*cos(x2)*cos(x3)", "cos(x1)*cos(x2)*sin(x3)", "cos(x1)*sin(x2)", "sin(x1)"},
                     {-0.5, -0.5, 0}, {0.5, 0.5, 1.5}, 3);
       }},
      {{"graph_surface", "paraboloid graph (x1, x2, x1^2 + x2^2, 0)", {}},
       [](const Values&) {
         return spec({"x1", "x2"}, {"x1", "x2", "x1^2 + x2^2", "0"}, {-0.5, -0.5}, {0.5, 0.5}, 6);
       }},
      {{"curved_surface", "curved surface in R^4 with varying slant angles", {}},
       [](const Values&) { return spec({"x1", "x2"}, curved_surface("x1", "x2"), {-0.5, -0.5}, {0.5, 0.5}, 6); }},
      {{"holomorphic_curve", "curved complex curve for (I+J+K)/sqrt(3); constant slant angles", {}},
       [](const Values&) {
         return spec({"x1", "x2"}, holomorphic_curve("x1", "x2"), {-0.5, -0.5}, {0.5, 0.5}, 6);
       }},
      {{"holomorphic_product", "two such complex curves in separate blocks of R^8", {}},
       [](const Values&) {
         return spec(expr::numbered_params("x", 4),
                     concat(holomorphic_curve("x1", "x2"), holomorphic_curve("x3", "x4")), {-0.5, -0.5, -0.5, -0.5},
                     {0.5, 0.5, 0.5, 0.5}, 3);
       }},
      {{"rotating_quaternionic_line",
        "(cos s q - t sin s e1, sin s q + t cos s e1) in R^8; curved h-semi-slant with shared D1", {}},
       [](const Values&) {
         return spec({"q1", "q2", "q3", "q4", "s", "t"},
                     {"cos(s)*q1 - t*sin(s)", "cos(s)*q2", "cos(s)*q3", "cos(s)*q4", "sin(s)*q1 + t*cos(s)",
                      "sin(s)*q2", "sin(s)*q3", "sin(s)*q4"},
                     {-0.2, 0.5, 0.5, 0.5, 0, 0.5}, {0.2, 1, 1, 1, 0.5, 1}, 2);
       }},
      {{"surface_times_block", "R^4 x curved surface in R^8 (product, trivial warp)", {}},
       [](const Values&) {
         ChartSpec s = spec({"b1", "b2", "b3", "b4", "t1", "t2"},
                            concat({"b1", "b2", "b3", "b4"}, curved_surface("t1", "t2")),
                            {-1, -1, -1, -1, -0.5, -0.5}, {1, 1, 1, 1, 0.5, 0.5}, 2);
         s.warp = WarpSpec{4, "1", curved_surface("t1", "t2")};
         return s;
       }},
      {{"circle_times_line", "cylinder (cos x1, sin x1, x2, 0)", {}},
       [](const Values&) {
         return spec({"x1", "x2"}, {"cos(x1)", "sin(x1)", "x2", "0"}, {0, -1}, {3, 1}, 6);
       }},
      {{"identity_r4", "R^4 itself", {}},
       [](const Values&) {
         return spec(expr::numbered_params("x", 4), {"x1", "x2", "x3", "x4"}, {-1, -1, -1, -1}, {1, 1, 1, 1}, 3);
       }},
      {{"warped_revolution", "surface of revolution (b, f cos t, f sin t, 0), f = exp(c b)", {{"c", "0.5"}}},
       [](const Values& v) {
         ChartSpec s = spec({"b1", "t1"},
                            sub_all({"b1", "exp({c}*b1)*cos(t1)", "exp({c}*b1)*sin(t1)", "0"}, v), {-0.5, 0},
                            {0.5, 1.5}, 6);
         s.warp = WarpSpec{1, sub("exp({c}*b1)", v), {"cos(t1)", "sin(t1)"}};
         return s;
       }},
      {{"warped_revolution_2d", "(b1, b2, f cos t, f sin t), f = exp(0.3 b1 + 0.2 b2)", {}},
       [](const Values&) {
         const std::string f = "exp(0.3*b1 + 0.2*b2)";
         ChartSpec s = spec({"b1", "b2", "t1"}, {"b1", "b2", f + "*cos(t1)", f + "*sin(t1)"}, {-0.5, -0.5, 0},
                            {0.5, 0.5, 1.5}, 3);
         s.warp = WarpSpec{2, f, {"cos(t1)", "sin(t1)"}};
         return s;
       }},
      {{"warped_sphere_fiber", "(b, f sigma(t)) with sigma on the unit 2-sphere, f = 1 + b^2", {}},
       [](const Values&) {
         const std::string f = "(1 + b1^2)";
         const std::vector<std::string> sigma = {"cos(t1)*cos(t2)", "cos(t1)*sin(t2)", "sin(t1)"};
         ChartSpec s = spec({"b1", "t1", "t2"}, {"b1", f + "*" + sigma[0], f + "*" + sigma[1], f + "*" + sigma[2]},
                            {0.5, -0.5, 0}, {1.5, 0.5, 1.5}, 3);
         s.warp = WarpSpec{1, f, sigma};
         return s;
       }},
      {{"warped_cone_candidate", "R^4 x_f S^2-patch in R^8, f = exp(0.2 (b1 + b2)); warped but D1 not the base",
        {}},
       [](const Values&) {
         const std::string f = "exp(0.2*(b1 + b2))";
         const std::vector<std::string> sigma = {"cos(t1)*cos(t2)", "cos(t1)*sin(t2)", "sin(t1)"};
         ChartSpec s = spec({"b1", "b2", "b3", "b4", "t1", "t2"},
                            {"b1", "b2", "b3", "b4", f + "*" + sigma[0], f + "*" + sigma[1], f + "*" + sigma[2], "0"},
                            {-0.5, -0.5, -0.5, -0.5, -0.5, 0}, {0.5, 0.5, 0.5, 0.5, 0.5, 1.5}, 2);
         s.warp = WarpSpec{4, f, sigma};
         return s;
       }},
      {{"quaternionic_cone", "(q u0, q u1, q u2) in R^12, q in H, u on S^2; warped with f = |q|, totally real fiber",
        {}},
       [](const Values&) {
         const std::vector<std::string> u = {"cos(t1)*cos(t2)", "cos(t1)*sin(t2)", "sin(t1)"};
         std::vector<std::string> comps;
         for (const auto& uk : u)
           for (const char* q : {"q1", "q2", "q3", "q4"}) comps.push_back(std::string(q) + "*" + uk);
         ChartSpec s = spec({"q1", "q2", "q3", "q4", "t1", "t2"}, comps, {0.5, 0.5, 0.5, 0.5, -0.5, 0},
                            {1, 1, 1, 1, 0.5, 1.5}, 2);
         s.warp = WarpSpec{4, "sqrt(q1^2 + q2^2 + q3^2 + q4^2)", u};
         return s;
       }},
      {{"reverse_warp_candidate",
        "slant plane base times f(b) * quaternionic line, f = 1 + c b1; probe candidate", {{"c", "0.3"}}},
       [](const Values& v) {
         const std::string f = sub("(1 + {c}*b1)", v);
         ChartSpec s = spec({"b1", "b2", "t1", "t2", "t3", "t4"},
                            {"b1", "b2*cos(pi/3)", "b2*sin(pi/3)", "0", f + "*t1", f + "*t2", f + "*t3", f + "*t4"},
                            {-0.5, -0.5, 0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 1, 1, 1, 1}, 2);
         s.warp = WarpSpec{2, f, {"t1", "t2", "t3", "t4"}};
         s.reverse_candidate = true;
         return s;
       }},
      {{"reverse_warp_trivial", "the same candidate with f = 1", {}},
       [](const Values&) {
         ChartSpec s = spec({"b1", "b2", "t1", "t2", "t3", "t4"},
                            {"b1", "b2*cos(pi/3)", "b2*sin(pi/3)", "0", "t1", "t2", "t3", "t4"},
                            {-0.5, -0.5, 0.5, 0.5, 0.5, 0.5}, {0.5, 0.5, 1, 1, 1, 1}, 2);
         s.warp = WarpSpec{2, "1", {"t1", "t2", "t3", "t4"}};
         s.reverse_candidate = true;
         return s;
       }},
  };
  return table;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

const std::vector<CatalogInfo>& catalog() {
  static const std::vector<CatalogInfo> infos = [] {
    std::vector<CatalogInfo> out;
    for (const auto& b : builtins()) out.push_back(b.info);
    return out;
  }();
  return infos;
}

std::vector<std::string> catalog_names() {
  std::vector<std::string> out;
  for (const auto& b : builtins()) out.push_back(b.info.name);
  return out;
}

ChartSpec catalog_chart(std::string_view call) {
  const std::string text = trim(call);
  const auto open = text.find('(');
  const std::string name = trim(text.substr(0, open));
  const Builtin* found = nullptr;
  for (const auto& b : builtins())
    if (b.info.name == name) found = &b;
  if (!found) throw UnknownIdentifier(name, 1, 1);

  Values values;
  for (const auto& [key, def] : found->info.defaults)
    if (def != "none") values[key] = expr::parse_constant(def);
  if (open != std::string::npos) {
    if (text.back() != ')') throw ParseError("expected ')' at the end of '" + text + "'", 1, int(text.size()));
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    std::size_t pos = 0;
    while (pos <= inner.size() && !trim(inner.substr(pos)).empty()) {
      const auto comma = inner.find(',', pos);
      const std::string item = inner.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw ParseError("expected key=value in '" + trim(item) + "'", 1, int(open + 2 + pos));
      const std::string key = trim(item.substr(0, eq));
      bool known = false;
      for (const auto& d : found->info.defaults) known = known || d.first == key;
      if (!known) throw UnknownIdentifier(key, 1, int(open + 2 + pos));
      values[key] = expr::parse_constant(trim(item.substr(eq + 1)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  ChartSpec s = found->make(values);
  s.name = text;
  return s;
}

}  // namespace slantlab
