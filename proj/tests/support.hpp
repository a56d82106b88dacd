#pragma once

// Test oracles shared by the unit and acceptance suites.

#include "slantlab/expr.hpp"
#include "slantlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace slantlab::testing {

/// Random expression source over x1..xn whose value and derivatives stay
/// bounded on [-1, 1]^n (every singular function is fed a safe argument).
inline std::string random_expression(Rng& rng, int n, int depth) {
  auto var = [&] { return "x" + std::to_string(1 + static_cast<int>(rng.next() % n)); };
  auto coef = [&] {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", rng.uniform(-2.0, 2.0));
    return std::string(buf[0] == '-' ? "(" + std::string(buf) + ")" : buf);
  };
  if (depth == 0) return rng.uniform() < 0.7 ? var() : coef();
  const auto sub = [&] { return random_expression(rng, n, depth - 1); };
  switch (rng.next() % 12) {
    case 0: return "(" + sub() + " + " + sub() + ")";
    case 1: return "(" + sub() + " - " + sub() + ")";
    case 2: return "(" + sub() + " * " + sub() + ")";
    case 3: return "(" + sub() + " / (2 + cos(" + sub() + ")))";
    case 4: return "sin(" + sub() + ")";
    case 5: return "cos(" + sub() + ")";
    case 6: return "exp(0.5*sin(" + sub() + "))";
    case 7: return "log(1 + (" + sub() + ")^2)";
    case 8: return "sqrt(2 + sin(" + sub() + "))";
    case 9: return "atan(" + sub() + ")";
    case 10: return "tan(0.4*sin(" + sub() + "))";
    default: return "(" + sub() + ")^" + std::to_string(2 + static_cast<int>(rng.next() % 2));
  }
}

struct JetMismatch {
  double gradient = 0.0;  // relative to max(1, |exact|)
  double hessian = 0.0;
};

/// Compares an exact jet with central differences: the gradient against
/// differences of values, the Hessian against differences of gradients.
inline JetMismatch compare_with_differences(const expr::Expression& e, const Vec& x, double h = 1e-5) {
  const auto jet = e.jet(x);
  JetMismatch out;
  for (int i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (e.eval(xp) - e.eval(xm)) / (2 * h);
    out.gradient = std::max(out.gradient, std::abs(fd - jet.gradient[i]) / std::max(1.0, std::abs(jet.gradient[i])));
    const Vec gd = (e.jet(xp).gradient - e.jet(xm).gradient) / (2 * h);
    for (int j = 0; j < x.size(); ++j)
      out.hessian =
          std::max(out.hessian, std::abs(gd[j] - jet.hessian(j, i)) / std::max(1.0, std::abs(jet.hessian(j, i))));
  }
  return out;
}

}  // namespace slantlab::testing
