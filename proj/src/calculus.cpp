#include "slantlab/calculus.hpp"

#include "slantlab/error.hpp"

#include <algorithm>

namespace slantlab {

TangentField TangentField::coordinate(int i, int n) {
  const Vec u = Vec::Unit(n, i);
  return {[u](const Vec&) { return u; }};
}

TangentField TangentField::constant(const Vec& u) {
  return {[u](const Vec&) { return u; }};
}

TangentField TangentField::random_affine(Rng& rng, int n, double scale) {
  const Vec a = scale * rng.normal_vector(n);
  Mat b(n, n);
  for (int i = 0; i < n; ++i) b.col(i) = scale * rng.normal_vector(n);
  return {[a, b](const Vec& x) -> Vec { return a + b * x; }};
}

Vec ambient_vector(const ImmersionChart& chart, const TangentField& X, const Vec& x) {
  return chart.jacobian(x) * X(x);
}

AmbientField ambient_field(const ImmersionChart& chart, const TangentField& X) {
  return [&chart, X](const Vec& x) { return ambient_vector(chart, X, x); };
}

Vec lie_bracket(const TangentField& X, const TangentField& Y, const Vec& x, double step) {
  const Vec u = X(x);
  const Vec v = Y(x);
  const Vec dv_u = (Y(x + step * u) - Y(x - step * u)) / (2 * step);
  const Vec du_v = (X(x + step * v) - X(x - step * v)) / (2 * step);
  return dv_u - du_v;
}

Vec along(const ImmersionChart&, const TangentField& X, const AmbientField& W, const Vec& x, double step) {
  return directional_derivative(W, x, X(x), step);
}

Vec nabla(const ImmersionChart& chart, const TangentField& X, const AmbientField& W, const Vec& x) {
  return frame_at(chart, x).tangent_projector * along(chart, X, W, x);
}

Mat distribution_projector(const ImmersionChart& chart, const Vec& x, Structure r, Distribution d) {
  const PointGeometry pg = frame_at(chart, x);
  const Split sp = split_distributions(decompose(pg, chart.basis(), r));
  const Mat& p = d == Distribution::D1 ? sp.d1_projector : sp.d2_projector;
  return pg.tangent_frame * p * pg.tangent_frame.transpose();
}

TangentField distribution_field(const ImmersionChart& chart, Structure r, Distribution d, TangentField base) {
  return {[&chart, r, d, base](const Vec& x) -> Vec {
    const PointGeometry pg = frame_at(chart, x);
    const Split sp = split_distributions(decompose(pg, chart.basis(), r));
    const Mat& p = d == Distribution::D1 ? sp.d1_projector : sp.d2_projector;
    const Vec frame = p * (pg.tangent_frame.transpose() * (pg.jacobian * base(x)));
    return pg.coordinate_to_frame.triangularView<Eigen::Upper>().solve(frame);
  }};
}

AmbientField phi_field(const ImmersionChart& chart, Structure r, const TangentField& Y) {
  return [&chart, r, Y](const Vec& x) -> Vec {
    const PointGeometry pg = frame_at(chart, x);
    return pg.tangent_projector * (chart.basis().matrix(r, pg.p) * (pg.jacobian * Y(x)));
  };
}

AmbientField omega_field(const ImmersionChart& chart, Structure r, const TangentField& Y) {
  return [&chart, r, Y](const Vec& x) -> Vec {
    const PointGeometry pg = frame_at(chart, x);
    return pg.normal_projector * (chart.basis().matrix(r, pg.p) * (pg.jacobian * Y(x)));
  };
}

AmbientField random_normal_field(const ImmersionChart& chart, Rng& rng, double scale) {
  const int amb = chart.ambient_dim();
  const int n = chart.dim();
  const Vec a = scale * rng.normal_vector(amb);
  Mat b(amb, n);
  for (int i = 0; i < n; ++i) b.col(i) = scale * rng.normal_vector(amb);
  return [&chart, a, b](const Vec& x) -> Vec { return frame_at(chart, x).normal_projector * (a + b * x); };
}

Vec nabla_phi(const ImmersionChart& chart, const TangentField& X, const TangentField& Y, const Vec& x, Structure r) {
  const PointGeometry pg = frame_at(chart, x);
  const Mat rm = chart.basis().matrix(r, pg.p);
  const Vec nabla_y = pg.tangent_projector * along(chart, X, ambient_field(chart, Y), x);
  return pg.tangent_projector * along(chart, X, phi_field(chart, r, Y), x) - pg.tangent_projector * rm * nabla_y;
}

Vec d_omega(const ImmersionChart& chart, const TangentField& X, const TangentField& Y, const Vec& x, Structure r) {
  const PointGeometry pg = frame_at(chart, x);
  const Mat rm = chart.basis().matrix(r, pg.p);
  const Vec nabla_y = pg.tangent_projector * along(chart, X, ambient_field(chart, Y), x);
  return pg.normal_projector * along(chart, X, omega_field(chart, r, Y), x) - pg.normal_projector * rm * nabla_y;
}

double PhiOmegaResiduals::max() const { return std::max({nabla_phi, d_omega, b_part, c_part}); }

PhiOmegaResiduals phi_omega_residuals(const ImmersionChart& chart, const TangentField& X, const TangentField& Y,
                                      const AmbientField& Z, const Vec& x, Structure r) {
  if (!chart.basis().is_parallel()) throw ContractViolation("derivative identities need a parallel basis");
  const PointGeometry pg = second_fundamental_form(chart, x);
  const Mat rm = chart.basis().matrix(r, pg.p);
  const Mat& t = pg.tangent_projector;
  const Mat& nn = pg.normal_projector;
  const Vec xa = pg.jacobian * X(x);
  const Vec ya = pg.jacobian * Y(x);
  const Vec hxy = pg.sff(xa, ya);

  PhiOmegaResiduals out;
  const Vec lhs1 = nabla_phi(chart, X, Y, x, r);
  const Vec rhs1 = pg.shape_apply(nn * rm * ya, xa) + t * rm * hxy;
  out.nabla_phi = (lhs1 - rhs1).norm();

  const Vec lhs2 = d_omega(chart, X, Y, x, r);
  const Vec rhs2 = -pg.sff(xa, t * rm * ya) + nn * rm * hxy;
  out.d_omega = (lhs2 - rhs2).norm();

  const Vec z = Z(x);
  const Vec dz = nn * along(chart, X, Z, x);
  const Vec az_x = pg.shape_apply(z, xa);
  const AmbientField bz = [&chart, &Z, r](const Vec& y) -> Vec {
    const PointGeometry g = frame_at(chart, y);
    return g.tangent_projector * chart.basis().matrix(r, g.p) * Z(y);
  };
  const AmbientField cz = [&chart, &Z, r](const Vec& y) -> Vec {
    const PointGeometry g = frame_at(chart, y);
    return g.normal_projector * chart.basis().matrix(r, g.p) * Z(y);
  };
  const Vec b_lhs = -t * rm * az_x + t * rm * dz;
  const Vec b_rhs = t * along(chart, X, bz, x) - pg.shape_apply(nn * rm * z, xa);
  out.b_part = (b_lhs - b_rhs).norm();

  const Vec c_lhs = -nn * rm * az_x + nn * rm * dz;
  const Vec c_rhs = pg.sff(xa, t * rm * z) + nn * along(chart, X, cz, x);
  out.c_part = (c_lhs - c_rhs).norm();
  return out;
}

Mat omega_form(const ImmersionChart& chart, const Vec& x, Structure r) {
  const auto jets = chart.jets(x);
  const Mat rm = chart.basis().matrix(r, jets.value);
  return jets.jacobian.transpose() * rm.transpose() * jets.jacobian;
}

double d_omega_form(const ImmersionChart& chart, const Vec& x, Structure r, const TangentField& X,
                    const TangentField& Y, const TangentField& Z, double step) {
  auto pair = [&chart, r](const TangentField& a, const TangentField& b) {
    return [&chart, r, &a, &b](const Vec& y) { return a(y).dot(omega_form(chart, y, r) * b(y)); };
  };
  auto derive = [&](const TangentField& along_field, const std::function<double(const Vec&)>& fn) {
    const Vec u = along_field(x);
    return (fn(x + step * u) - fn(x - step * u)) / (2 * step);
  };
  const Mat om = omega_form(chart, x, r);
  auto at = [&](const Vec& a, const Vec& b) { return a.dot(om * b); };
  return derive(X, pair(Y, Z)) - derive(Y, pair(X, Z)) + derive(Z, pair(X, Y)) -
         at(lie_bracket(X, Y, x, step), Z(x)) + at(lie_bracket(X, Z, x, step), Y(x)) -
         at(lie_bracket(Y, Z, x, step), X(x));
}

Vec tangent_gradient(const ImmersionChart& chart, const std::function<double(const Vec&)>& fn, const Vec& x,
                     double step) {
  const int n = chart.dim();
  Vec d(n);
  for (int i = 0; i < n; ++i) {
    const Vec e = Vec::Unit(n, i);
    d[i] = (fn(x + step * e) - fn(x - step * e)) / (2 * step);
  }
  const Mat jac = chart.jacobian(x);
  const Mat g = jac.transpose() * jac;
  return jac * g.ldlt().solve(d);
}

}  // namespace slantlab
