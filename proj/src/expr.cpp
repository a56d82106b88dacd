#include "slantlab/expr.hpp"

#include "slantlab/error.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

namespace slantlab::expr {

namespace {

struct FuncInfo {
  std::string_view name;
  Func func;
};

constexpr std::array<FuncInfo, 7> kFunctions{{{"sin", Func::Sin},
                                              {"cos", Func::Cos},
                                              {"tan", Func::Tan},
                                              {"exp", Func::Exp},
                                              {"log", Func::Log},
                                              {"sqrt", Func::Sqrt},
                                              {"atan", Func::Atan}}};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& f : kFunctions)
    if (f.name == name) return f.func;
  return std::nullopt;
}

std::string_view function_name(Func func) {
  for (const auto& f : kFunctions)
    if (f.func == func) return f.name;
  return "?";
}

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Number;
  n->number = v;
  return n;
}

NodePtr make_variable(int index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->variable = index;
  return n;
}

NodePtr make_unary(NodeKind kind, NodePtr operand) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_pow(NodePtr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Pow;
  n->lhs = std::move(base);
  n->exponent = exponent;
  return n;
}

NodePtr make_call(Func f, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Call;
  n->func = f;
  n->lhs = std::move(arg);
  return n;
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { End, Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return lex_number(t);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    advance();
    t.text = std::string(1, c);
    switch (c) {
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '^': t.kind = Tok::Caret; break;
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case ',': t.kind = Tok::Comma; break;
      default: throw ParseError("unexpected character '" + t.text + "'", t.line, t.column);
    }
    return t;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  Token lex_number(Token t) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        while (pos_ < look) advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      }
    }
    t.kind = Tok::Number;
    t.text = std::string(src_.substr(start, pos_ - start));
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (res.ec != std::errc() || !std::isfinite(t.number))
      throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& params) : lexer_(src), params_(params) {
    cur_ = lexer_.next();
  }

  NodePtr parse_all() {
    if (cur_.kind == Tok::End) throw ParseError("empty expression", cur_.line, cur_.column);
    NodePtr e = parse_expr();
    if (cur_.kind != Tok::End) throw ParseError("unexpected '" + cur_.text + "'", cur_.line, cur_.column);
    return e;
  }

 private:
  void bump() { cur_ = lexer_.next(); }

  [[noreturn]] void fail_here(const std::string& what) const {
    if (cur_.kind == Tok::End) throw ParseError(what + ": unexpected end of input", cur_.line, cur_.column);
    throw ParseError(what + ": unexpected '" + cur_.text + "'", cur_.line, cur_.column);
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const NodeKind k = cur_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
      bump();
      lhs = make_binary(k, lhs, parse_term());
    }
    return lhs;
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const NodeKind k = cur_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
      bump();
      lhs = make_binary(k, lhs, parse_unary());
    }
    return lhs;
  }

  NodePtr parse_unary() {
    if (cur_.kind == Tok::Minus) {
      bump();
      return make_unary(NodeKind::Negate, parse_unary());
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (cur_.kind != Tok::Caret) return base;
    bump();
    bool negative = false;
    if (cur_.kind == Tok::Minus) {
      negative = true;
      bump();
    }
    if (cur_.kind != Tok::Number) fail_here("exponent must be an integer literal");
    const double e = cur_.number;
    if (e != std::floor(e) || e > 1e6)
      throw ParseError("exponent must be an integer literal, got '" + cur_.text + "'", cur_.line, cur_.column);
    bump();
    if (cur_.kind == Tok::Caret) fail_here("chained exponents need parentheses");
    return make_pow(base, negative ? -static_cast<int>(e) : static_cast<int>(e));
  }

  NodePtr parse_primary() {
    switch (cur_.kind) {
      case Tok::Number: {
        NodePtr n = make_number(cur_.number);
        bump();
        return n;
      }
      case Tok::LParen: {
        bump();
        NodePtr inner = parse_expr();
        if (cur_.kind != Tok::RParen) fail_here("expected ')'");
        bump();
        return inner;
      }
      case Tok::Ident: return parse_identifier();
      default: fail_here("expected an operand");
    }
  }

  NodePtr parse_identifier() {
    const Token id = cur_;
    bump();
    if (auto f = lookup_function(id.text)) {
      if (cur_.kind != Tok::LParen)
        throw ArityError("function '" + id.text + "' requires a parenthesized argument", id.line, id.column);
      bump();
      if (cur_.kind == Tok::RParen)
        throw ArityError("function '" + id.text + "' takes exactly one argument, got 0", id.line, id.column);
      NodePtr arg = parse_expr();
      if (cur_.kind == Tok::Comma)
        throw ArityError("function '" + id.text + "' takes exactly one argument", id.line, id.column);
      if (cur_.kind != Tok::RParen) fail_here("expected ')'");
      bump();
      return make_call(*f, arg);
    }
    for (std::size_t i = 0; i < params_.size(); ++i)
      if (params_[i] == id.text) return make_variable(static_cast<int>(i));
    if (id.text == "pi") return make_number(M_PI);
    throw UnknownIdentifier(id.text, id.line, id.column);
  }

  Lexer lexer_;
  const std::vector<std::string>& params_;
  Token cur_;
};

// ---------------------------------------------------------------------------
// Printing

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print(const Node& n, const std::vector<std::string>& params, std::string& out) {
  switch (n.kind) {
    case NodeKind::Number: out += format_number(n.number); return;
    case NodeKind::Variable: out += params[static_cast<std::size_t>(n.variable)]; return;
    case NodeKind::Negate:
      out += "(-";
      print(*n.lhs, params, out);
      out += ")";
      return;
    case NodeKind::Pow:
      out += "(";
      print(*n.lhs, params, out);
      out += "^" + std::to_string(n.exponent) + ")";
      return;
    case NodeKind::Call:
      out += function_name(n.func);
      out += "(";
      print(*n.lhs, params, out);
      out += ")";
      return;
    default: {
      const char* op = n.kind == NodeKind::Add ? " + " : n.kind == NodeKind::Sub ? " - " : n.kind == NodeKind::Mul ? " * " : " / ";
      out += "(";
      print(*n.lhs, params, out);
      out += op;
      print(*n.rhs, params, out);
      out += ")";
      return;
    }
  }
}

std::string node_text(const Node& n, const std::vector<std::string>& params) {
  std::string s;
  print(n, params, s);
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation

class Evaluator {
 public:
  explicit Evaluator(const std::vector<std::string>& params) : params_(params) {}

  [[noreturn]] void domain(const Node& n, const std::string& what) const {
    throw DomainError(what + " in '" + node_text(n, params_) + "'");
  }

  double value(const Node& n, std::span<const double> x) const {
    switch (n.kind) {
      case NodeKind::Number: return n.number;
      case NodeKind::Variable: return x[static_cast<std::size_t>(n.variable)];
      case NodeKind::Negate: return -value(*n.lhs, x);
      case NodeKind::Add: return value(*n.lhs, x) + value(*n.rhs, x);
      case NodeKind::Sub: return value(*n.lhs, x) - value(*n.rhs, x);
      case NodeKind::Mul: return value(*n.lhs, x) * value(*n.rhs, x);
      case NodeKind::Div: {
        const double d = value(*n.rhs, x);
        if (d == 0.0) domain(n, "division by zero");
        return value(*n.lhs, x) / d;
      }
      case NodeKind::Pow: {
        const double b = value(*n.lhs, x);
        if (n.exponent < 0 && b == 0.0) domain(n, "division by zero");
        return std::pow(b, n.exponent);
      }
      case NodeKind::Call: {
        const double u = value(*n.lhs, x);
        switch (n.func) {
          case Func::Sin: return std::sin(u);
          case Func::Cos: return std::cos(u);
          case Func::Tan:
            if (std::cos(u) == 0.0) domain(n, "tangent pole");
            return std::tan(u);
          case Func::Exp: return std::exp(u);
          case Func::Log:
            if (u <= 0.0) domain(n, "log of non-positive value");
            return std::log(u);
          case Func::Sqrt:
            if (u < 0.0) domain(n, "sqrt of negative value");
            return std::sqrt(u);
          case Func::Atan: return std::atan(u);
        }
      }
    }
    return 0.0;
  }

  Jet2 jet(const Node& n, const Vec& x) const {
    const Eigen::Index dim = x.size();
    switch (n.kind) {
      case NodeKind::Number: return constant(n.number, dim);
      case NodeKind::Variable: {
        Jet2 j = constant(x[n.variable], dim);
        j.gradient[n.variable] = 1.0;
        return j;
      }
      case NodeKind::Negate: {
        Jet2 j = jet(*n.lhs, x);
        j.value = -j.value;
        j.gradient = -j.gradient;
        j.hessian = -j.hessian;
        return j;
      }
      case NodeKind::Add:
      case NodeKind::Sub: {
        Jet2 a = jet(*n.lhs, x);
        const Jet2 b = jet(*n.rhs, x);
        const double s = n.kind == NodeKind::Add ? 1.0 : -1.0;
        a.value += s * b.value;
        a.gradient += s * b.gradient;
        a.hessian += s * b.hessian;
        return a;
      }
      case NodeKind::Mul: return product(jet(*n.lhs, x), jet(*n.rhs, x));
      case NodeKind::Div: {
        const Jet2 d = jet(*n.rhs, x);
        if (d.value == 0.0) domain(n, "division by zero");
        const double u = d.value;
        return product(jet(*n.lhs, x), chain(d, 1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u)));
      }
      case NodeKind::Pow: {
        const Jet2 b = jet(*n.lhs, x);
        const int k = n.exponent;
        if (k == 0) return constant(1.0, dim);
        const double u = b.value;
        if (k < 0 && u == 0.0) domain(n, "division by zero");
        const double g1 = k * std::pow(u, k - 1);
        const double g2 = (k == 1) ? 0.0 : k * (k - 1) * std::pow(u, k - 2);
        return chain(b, std::pow(u, k), g1, g2);
      }
      case NodeKind::Call: return call(n, jet(*n.lhs, x));
    }
    return constant(0.0, dim);
  }

 private:
  static Jet2 constant(double v, Eigen::Index dim) {
    return Jet2{v, Vec::Zero(dim), Mat::Zero(dim, dim)};
  }

  // g(u) with g, g', g'' evaluated at u.value.
  static Jet2 chain(const Jet2& u, double g, double g1, double g2) {
    Jet2 r;
    r.value = g;
    r.gradient = g1 * u.gradient;
    r.hessian = g1 * u.hessian + g2 * (u.gradient * u.gradient.transpose());
    return r;
  }

  static Jet2 product(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.value = a.value * b.value;
    r.gradient = a.value * b.gradient + b.value * a.gradient;
    const Mat cross = a.gradient * b.gradient.transpose();
    r.hessian = a.value * b.hessian + b.value * a.hessian + cross + cross.transpose();
    return r;
  }

  Jet2 call(const Node& n, const Jet2& u) const {
    const double v = u.value;
    switch (n.func) {
      case Func::Sin: return chain(u, std::sin(v), std::cos(v), -std::sin(v));
      case Func::Cos: return chain(u, std::cos(v), -std::sin(v), -std::cos(v));
      case Func::Tan: {
        const double c = std::cos(v);
        if (c == 0.0) domain(n, "tangent pole");
        const double t = std::tan(v);
        const double sec2 = 1.0 / (c * c);
        return chain(u, t, sec2, 2.0 * sec2 * t);
      }
      case Func::Exp: {
        const double e = std::exp(v);
        return chain(u, e, e, e);
      }
      case Func::Log:
        if (v <= 0.0) domain(n, "log of non-positive value");
        return chain(u, std::log(v), 1.0 / v, -1.0 / (v * v));
      case Func::Sqrt: {
        if (v <= 0.0) domain(n, "sqrt derivative undefined at non-positive value");
        const double s = std::sqrt(v);
        return chain(u, s, 0.5 / s, -0.25 / (s * v));
      }
      case Func::Atan: {
        const double d = 1.0 / (1.0 + v * v);
        return chain(u, std::atan(v), d, -2.0 * v * d * d);
      }
    }
    return u;
  }

  const std::vector<std::string>& params_;
};

bool uses_variable(const Node& n) {
  if (n.kind == NodeKind::Variable) return true;
  if (n.lhs && uses_variable(*n.lhs)) return true;
  if (n.rhs && uses_variable(*n.rhs)) return true;
  return false;
}

}  // namespace

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Number: return a.number == b.number;
    case NodeKind::Variable: return a.variable == b.variable;
    case NodeKind::Pow:
      if (a.exponent != b.exponent) return false;
      break;
    case NodeKind::Call:
      if (a.func != b.func) return false;
      break;
    default: break;
  }
  if ((a.lhs == nullptr) != (b.lhs == nullptr) || (a.rhs == nullptr) != (b.rhs == nullptr)) return false;
  if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
  return true;
}

Expression::Expression(NodePtr root, std::vector<std::string> params)
    : root_(std::move(root)), params_(std::move(params)) {}

bool Expression::is_constant() const { return !uses_variable(*root_); }

double Expression::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != arity())
    throw InvalidDimension("expression expects " + std::to_string(arity()) + " parameters, got " +
                           std::to_string(x.size()));
  return Evaluator(params_).value(*root_, x);
}

Jet2 Expression::jet(const Vec& x) const {
  if (x.size() != arity())
    throw InvalidDimension("expression expects " + std::to_string(arity()) + " parameters, got " +
                           std::to_string(x.size()));
  Jet2 j = Evaluator(params_).jet(*root_, x);
  // Rounding in the cross terms can leave ulp-level asymmetry.
  j.hessian = 0.5 * (j.hessian + j.hessian.transpose());
  return j;
}

std::string Expression::to_string() const { return node_text(*root_, params_); }

Expression parse(std::string_view source, std::vector<std::string> params) {
  Parser parser(source, params);
  NodePtr root = parser.parse_all();
  return Expression(std::move(root), std::move(params));
}

double parse_constant(std::string_view source) {
  const Expression e = parse(source, {});
  return e.eval(std::span<const double>{});
}

VectorMapJet eval_vector_map(std::span<const Expression> components, const Vec& x) {
  const auto rows = static_cast<Eigen::Index>(components.size());
  VectorMapJet out;
  out.value.resize(rows);
  out.jacobian.resize(rows, x.size());
  out.hessians.reserve(components.size());
  for (Eigen::Index i = 0; i < rows; ++i) {
    Jet2 j = components[static_cast<std::size_t>(i)].jet(x);
    out.value[i] = j.value;
    out.jacobian.row(i) = j.gradient.transpose();
    out.hessians.push_back(std::move(j.hessian));
  }
  return out;
}

std::vector<std::string> numbered_params(std::string_view prefix, int count) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(count));
  for (int i = 1; i <= count; ++i) names.push_back(std::string(prefix) + std::to_string(i));
  return names;
}

}  // namespace slantlab::expr
