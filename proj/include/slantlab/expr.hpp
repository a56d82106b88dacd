#pragma once

// Component expressions for immersions and scalar fields.
//
// Grammar (lowest to highest precedence):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] INTEGER)?
//   primary := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'
//
// Identifiers are the declared parameters, the constant `pi`, or one of the
// functions sin, cos, tan, exp, log, sqrt, atan (exactly one argument each).
// Exponents are integer literals, so `-x^2` parses as `-(x^2)`.

#include "slantlab/linalg.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace slantlab::expr {

enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Atan };

enum class NodeKind { Number, Variable, Negate, Add, Sub, Mul, Div, Pow, Call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind{};
  double number = 0.0;   // Number
  int variable = -1;     // Variable: index into the parameter list
  int exponent = 0;      // Pow
  Func func{};           // Call
  NodePtr lhs;           // operand of unary nodes, left operand of binary nodes
  NodePtr rhs;
};

bool structurally_equal(const Node& a, const Node& b);

/// Value, gradient and Hessian of a scalar expression at a point.
struct Jet2 {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

class Expression {
 public:
  Expression() = default;
  Expression(NodePtr root, std::vector<std::string> params);

  const Node& root() const { return *root_; }
  const std::vector<std::string>& params() const { return params_; }
  int arity() const { return static_cast<int>(params_.size()); }

  /// True when no declared parameter occurs in the tree.
  bool is_constant() const;

  double eval(std::span<const double> x) const;
  double eval(const Vec& x) const { return eval(std::span<const double>(x.data(), x.size())); }

  /// Exact value/gradient/Hessian by second-order forward propagation.
  Jet2 jet(const Vec& x) const;

  /// Fully parenthesized text that parses back to the same tree.
  std::string to_string() const;

  friend bool operator==(const Expression& a, const Expression& b) {
    return a.params_ == b.params_ && structurally_equal(*a.root_, *b.root_);
  }

 private:
  NodePtr root_;
  std::vector<std::string> params_;
};

Expression parse(std::string_view source, std::vector<std::string> params);

/// Parses a parameter-free expression such as "pi/3" and evaluates it.
double parse_constant(std::string_view source);

/// Stacked jets of an ambient-valued map.
struct VectorMapJet {
  Vec value;
  Mat jacobian;               // components x params
  std::vector<Mat> hessians;  // one params x params matrix per component
};

VectorMapJet eval_vector_map(std::span<const Expression> components, const Vec& x);

/// Parameter names x1..xn (or any prefix).
std::vector<std::string> numbered_params(std::string_view prefix, int count);

}  // namespace slantlab::expr
