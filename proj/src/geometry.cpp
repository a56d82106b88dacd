#include "slantlab/geometry.hpp"

#include "slantlab/error.hpp"

#include <cmath>
#include <sstream>

namespace slantlab {

namespace {

std::string describe_point(const Vec& x) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

bool ParameterBox::contains(const Vec& x, double slack) const {
  if (x.size() != lower.size()) return false;
  for (int i = 0; i < x.size(); ++i)
    if (x[i] < lower[i] - slack || x[i] > upper[i] + slack) return false;
  return true;
}

std::vector<Vec> grid_points(const ParameterBox& box, const std::vector<int>& resolution) {
  const int n = static_cast<int>(box.lower.size());
  if (static_cast<int>(resolution.size()) != n)
    throw InvalidDimension("grid resolution has " + std::to_string(resolution.size()) + " axes, box has " +
                           std::to_string(n));
  for (int r : resolution)
    if (r < 2) throw ContractViolation("grid resolution must be >= 2 per axis");
  std::vector<Vec> out;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int i = 0; i < n; ++i)
      x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * idx[i] / double(resolution[i] - 1);
    out.push_back(x);
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] == resolution[axis]) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return out;
}

ImmersionChart::ImmersionChart(std::string name, std::vector<std::string> params,
                               std::vector<expr::Expression> components, ParameterBox domain,
                               std::shared_ptr<const QuaternionicBasis> basis)
    : name_(std::move(name)),
      params_(std::move(params)),
      components_(std::move(components)),
      domain_(std::move(domain)),
      basis_(std::move(basis)) {
  if (!basis_) throw ContractViolation("chart '" + name_ + "' has no basis");
  const int n = dim();
  const int amb = ambient_dim();
  if (n < 1) throw InvalidDimension("chart '" + name_ + "' has no parameters");
  if (amb != basis_->dim())
    throw InvalidDimension("chart '" + name_ + "' has " + std::to_string(amb) + " components, ambient is R^" +
                           std::to_string(basis_->dim()));
  if (n > amb) throw InvalidDimension("chart '" + name_ + "' has more parameters than ambient dimensions");
  for (const auto& c : components_)
    if (c.params() != params_) throw ContractViolation("component parameter list differs from chart parameters");
  if (domain_.lower.size() != n || domain_.upper.size() != n)
    throw InvalidDimension("chart '" + name_ + "' domain box does not match parameter count");
  for (int i = 0; i < n; ++i)
    if (!(domain_.lower[i] < domain_.upper[i]))
      throw ContractViolation("chart '" + name_ + "' domain box is empty along " + params_[i]);
}

ImmersionChart ImmersionChart::from_sources(std::string name, std::vector<std::string> params,
                                            const std::vector<std::string>& component_sources, ParameterBox domain,
                                            std::shared_ptr<const QuaternionicBasis> basis) {
  std::vector<expr::Expression> comps;
  comps.reserve(component_sources.size());
  for (const auto& s : component_sources) comps.push_back(expr::parse(s, params));
  return ImmersionChart(std::move(name), std::move(params), std::move(comps), std::move(domain), std::move(basis));
}

expr::VectorMapJet ImmersionChart::jets(const Vec& x) const { return expr::eval_vector_map(components_, x); }

Vec ImmersionChart::point(const Vec& x) const {
  if (x.size() != dim())
    throw InvalidDimension("parameter point has length " + std::to_string(x.size()) + ", chart '" + name_ +
                           "' expects " + std::to_string(dim()));
  Vec p(ambient_dim());
  for (int c = 0; c < ambient_dim(); ++c) p[c] = components_[c].eval(x);
  return p;
}

Mat ImmersionChart::jacobian(const Vec& x) const { return jets(x).jacobian; }

ImmersionChart ImmersionChart::with_basis(std::shared_ptr<const QuaternionicBasis> basis) const {
  return ImmersionChart(name_, params_, components_, domain_, std::move(basis));
}

Mat gram_schmidt(const Mat& m) {
  Mat q = m;
  for (int j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    const double norm = q.col(j).norm();
    if (norm == 0.0) throw DegenerateImmersion("Gram-Schmidt met a zero column");
    q.col(j) /= norm;
  }
  return q;
}

Vec PointGeometry::coordinate_coeffs(const Vec& tangent) const {
  return coordinate_to_frame.triangularView<Eigen::Upper>().solve(frame_coords(tangent));
}

Vec PointGeometry::sff(const Vec& X, const Vec& Y) const {
  if (!has_sff) throw ContractViolation("second fundamental form not computed");
  const Vec a = frame_coords(X);
  const Vec b = frame_coords(Y);
  Vec out = Vec::Zero(ambient_dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) out += a[i] * b[j] * h[i][j];
  return out;
}

Vec PointGeometry::shape_apply(const Vec& Z, const Vec& X) const {
  if (!has_sff) throw ContractViolation("second fundamental form not computed");
  Vec out = Vec::Zero(ambient_dim());
  for (int a = 0; a < dim(); ++a) out += sff(tangent_frame.col(a), X).dot(Z) * tangent_frame.col(a);
  return out;
}

Vec PointGeometry::coordinate_second_derivative(int i, int j) const {
  Vec v(ambient_dim());
  for (int c = 0; c < ambient_dim(); ++c) v[c] = coordinate_hessians[c](i, j);
  return v;
}

namespace {

PointGeometry build_frames(const ImmersionChart& chart, const Vec& x, const Mat& jac) {
  const int amb = chart.ambient_dim();
  const int n = chart.dim();
  Eigen::JacobiSVD<Mat> svd(jac);
  const Vec& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0 || sv[sv.size() - 1] < 1e-8 * sv[0])
    throw DegenerateImmersion("chart '" + chart.name() + "' is not an immersion at x = " + describe_point(x));

  PointGeometry pg;
  pg.x = x;
  pg.jacobian = jac;
  pg.tangent_frame = gram_schmidt(jac);
  pg.coordinate_to_frame = pg.tangent_frame.transpose() * jac;
  pg.coordinate_to_frame.triangularView<Eigen::StrictlyLower>().setZero();

  Mat full(amb, amb);
  full.leftCols(n) = pg.tangent_frame;
  int filled = n;
  for (int k = 0; k < amb && filled < amb; ++k) {
    Vec v = Vec::Unit(amb, k);
    for (int pass = 0; pass < 2; ++pass) v -= full.leftCols(filled) * (full.leftCols(filled).transpose() * v);
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    full.col(filled++) = v / norm;
  }
  if (filled != amb) throw DegenerateImmersion("normal completion failed at x = " + describe_point(x));
  pg.normal_frame = full.rightCols(amb - n);
  pg.tangent_projector = projector(pg.tangent_frame, amb);
  pg.normal_projector = Mat::Identity(amb, amb) - pg.tangent_projector;
  return pg;
}

}  // namespace

PointGeometry frame_at(const ImmersionChart& chart, const Vec& x) {
  PointGeometry pg = build_frames(chart, x, chart.jacobian(x));
  pg.p = chart.point(x);
  return pg;
}

PointGeometry second_fundamental_form(const ImmersionChart& chart, const Vec& x) {
  const auto jets = chart.jets(x);
  PointGeometry pg = build_frames(chart, x, jets.jacobian);
  pg.p = jets.value;
  pg.coordinate_hessians = jets.hessians;
  pg.has_sff = true;

  const int n = chart.dim();
  const int amb = chart.ambient_dim();
  // h on coordinate fields, then change basis with the inverse of the
  // triangular Gram-Schmidt factor: e_a = sum_i (R^-1)_{ia} d_i Phi.
  std::vector<std::vector<Vec>> hc(n, std::vector<Vec>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      hc[i][j] = pg.normal_projector * pg.coordinate_second_derivative(i, j);
      hc[j][i] = hc[i][j];
    }
  const Mat rinv = pg.coordinate_to_frame.triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
  pg.h.assign(n, std::vector<Vec>(n, Vec::Zero(amb)));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Vec v = Vec::Zero(amb);
      for (int i = 0; i <= a; ++i)
        for (int j = 0; j <= b; ++j) v += rinv(i, a) * rinv(j, b) * hc[i][j];
      pg.h[a][b] = v;
      pg.h[b][a] = v;
    }
  pg.mean_curvature = Vec::Zero(amb);
  for (int a = 0; a < n; ++a) pg.mean_curvature += pg.h[a][a];
  pg.mean_curvature /= n;
  return pg;
}

Mat shape_operator(const PointGeometry& pg, const Vec& Z) {
  if (!pg.has_sff) throw ContractViolation("second fundamental form not computed");
  if (Z.size() != pg.ambient_dim()) throw InvalidDimension("normal vector has wrong length");
  if ((pg.tangent_frame.transpose() * Z).norm() > 1e-8)
    throw ContractViolation("shape_operator: Z is not normal to the tangent space");
  const int n = pg.dim();
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = pg.h[i][j].dot(Z);
  return a;
}

double sff_norm_squared(const PointGeometry& pg) {
  if (!pg.has_sff) throw ContractViolation("second fundamental form not computed");
  double s = 0.0;
  for (const auto& row : pg.h)
    for (const auto& v : row) s += v.squaredNorm();
  return s;
}

Vec directional_derivative(const AmbientField& W, const Vec& x, const Vec& u, double step) {
  return (W(x + step * u) - W(x - step * u)) / (2.0 * step);
}

Vec normal_connection(const ImmersionChart& chart, const Vec& x, const Vec& u, const AmbientField& Z, double step) {
  auto check_normal = [&](const Vec& y, const Vec& z) {
    const Mat e = gram_schmidt(chart.jacobian(y));
    if ((e.transpose() * z).norm() > 1e-6 * std::max(1.0, z.norm()))
      throw ContractViolation("normal_connection: field is not normal near x = " + describe_point(x));
  };
  check_normal(x, Z(x));
  check_normal(x + step * u, Z(x + step * u));
  check_normal(x - step * u, Z(x - step * u));
  const PointGeometry pg = frame_at(chart, x);
  return pg.normal_projector * directional_derivative(Z, x, u, step);
}

}  // namespace slantlab
