#include "slantlab/ambient.hpp"

#include "slantlab/error.hpp"

#include <cmath>
#include <cstdio>

namespace slantlab {

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::I: return "I";
    case Structure::J: return "J";
    case Structure::K: return "K";
  }
  return "?";
}

AngleField AngleField::constant_value(double angle) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", angle);
  return AngleField{[angle](const Vec&) { return angle; }, true, buf};
}

AngleField AngleField::from_expression(const expr::Expression& e) {
  return AngleField{[e](const Vec& p) { return e.eval(p); }, e.is_constant(), e.to_string()};
}

QuaternionicBasis QuaternionicBasis::standard(int m) {
  if (m < 1) throw InvalidDimension("quaternionic dimension m must be >= 1, got " + std::to_string(m));
  const int n = 4 * m;
  QuaternionicBasis b;
  b.i_ = Mat::Zero(n, n);
  b.j_ = Mat::Zero(n, n);
  b.k_ = Mat::Zero(n, n);
  // Column c holds the image of the basis vector d/dy_{c+1}.
  auto set = [](Mat& r, int o, int from, int to, double sign) { r(o + to, o + from) = sign; };
  for (int k = 0; k < m; ++k) {
    const int o = 4 * k;
    // I: 1->2, 2->-1, 3->4, 4->-3
    set(b.i_, o, 0, 1, 1.0);
    set(b.i_, o, 1, 0, -1.0);
    set(b.i_, o, 2, 3, 1.0);
    set(b.i_, o, 3, 2, -1.0);
    // J: 1->3, 2->-4, 3->-1, 4->2
    set(b.j_, o, 0, 2, 1.0);
    set(b.j_, o, 1, 3, -1.0);
    set(b.j_, o, 2, 0, -1.0);
    set(b.j_, o, 3, 1, 1.0);
    // K: 1->4, 2->3, 3->-2, 4->-1
    set(b.k_, o, 0, 3, 1.0);
    set(b.k_, o, 1, 2, 1.0);
    set(b.k_, o, 2, 1, -1.0);
    set(b.k_, o, 3, 0, -1.0);
  }
  b.description_ = "standard(m=" + std::to_string(m) + ")";
  return b;
}

QuaternionicBasis QuaternionicBasis::rotated(const QuaternionicBasis& base, AngleField f) {
  if (base.is_rotated()) throw ContractViolation("rotated_basis expects an unrotated base");
  if (quaternion_relation_defect(base, Vec::Zero(base.dim())) > 1e-12)
    throw ContractViolation("base triple violates the quaternion relations");
  QuaternionicBasis b = base;
  b.description_ = "rotated(" + base.description_ + ", f=" + f.description + ")";
  b.angle_ = std::move(f);
  return b;
}

std::optional<double> QuaternionicBasis::angle_at(const Vec& p) const {
  if (!angle_) return std::nullopt;
  if (p.size() != dim())
    throw InvalidDimension("ambient point has length " + std::to_string(p.size()) + ", expected " +
                           std::to_string(dim()));
  const double f = angle_->eval(p);
  if (!(f >= 0.0 && f <= M_PI / 2))
    throw DomainError("rotation angle " + std::to_string(f) + " outside [0, pi/2]");
  return f;
}

bool QuaternionicBasis::degenerate_rotation_at(const Vec& p) const {
  const auto f = angle_at(p);
  if (!f) return false;
  return std::sin(*f) < 1e-9 || std::cos(*f) < 1e-9;
}

const Mat& QuaternionicBasis::base_matrix(Structure s) const {
  switch (s) {
    case Structure::I: return i_;
    case Structure::J: return j_;
    case Structure::K: return k_;
  }
  return k_;
}

Mat QuaternionicBasis::matrix(Structure s, const Vec& p) const {
  const auto f = angle_at(p);
  if (!f || s == Structure::K) return base_matrix(s);
  const double c = std::cos(*f);
  const double sn = std::sin(*f);
  if (s == Structure::I) return c * i_ - sn * j_;
  return sn * i_ + c * j_;
}

Vec QuaternionicBasis::apply(Structure s, const Vec& p, const Vec& v) const {
  if (v.size() != dim())
    throw InvalidDimension("vector has length " + std::to_string(v.size()) + ", expected " +
                           std::to_string(dim()));
  return matrix(s, p) * v;
}

double quaternion_relation_defect(const QuaternionicBasis& basis, const Vec& p) {
  const Mat i = basis.matrix(Structure::I, p);
  const Mat j = basis.matrix(Structure::J, p);
  const Mat k = basis.matrix(Structure::K, p);
  const Mat id = Mat::Identity(basis.dim(), basis.dim());
  double d = 0.0;
  for (const Mat* r : {&i, &j, &k}) {
    d = std::max(d, max_abs(*r * *r + id));
    d = std::max(d, max_abs(r->transpose() * *r - id));
  }
  d = std::max(d, max_abs(i * j - k));
  d = std::max(d, max_abs(j * i + k));
  d = std::max(d, max_abs(j * k - i));
  d = std::max(d, max_abs(k * j + i));
  d = std::max(d, max_abs(k * i - j));
  d = std::max(d, max_abs(i * k + j));
  return d;
}

}  // namespace slantlab
