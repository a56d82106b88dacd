#include "slantlab/warped.hpp"

#include "slantlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slantlab {

namespace {

std::string point_text(const Vec& x) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

Mat fiber_metric(const WarpedChart& wc, const Vec& x) {
  const auto jets = expr::eval_vector_map(wc.fiber_components, wc.fiber_part(x));
  return jets.jacobian.transpose() * jets.jacobian;
}

/// Ambient gradient of ln f and its coordinate differential.
struct LogWarp {
  double f = 0.0;
  Vec d;         // d(ln f) in coordinates
  Vec gradient;  // ambient tangent vector
};

LogWarp log_warp(const WarpedChart& wc, const PointGeometry& pg) {
  const auto jet = wc.warp.jet(pg.x);
  if (!(jet.value > 0.0)) throw DomainError("warping function is not positive at x = " + point_text(pg.x));
  LogWarp lw;
  lw.f = jet.value;
  lw.d = jet.gradient / jet.value;
  const Mat g = pg.jacobian.transpose() * pg.jacobian;
  lw.gradient = pg.jacobian * g.ldlt().solve(lw.d);
  return lw;
}

/// Orthonormal frame of the fiber directions (columns of the Jacobian past
/// the base ones); these are frame vectors base_dim.. of the tangent frame.
Mat fiber_frame(const WarpedChart& wc, const PointGeometry& pg) {
  return pg.tangent_frame.rightCols(wc.fiber_dim());
}

Mat base_frame(const WarpedChart& wc, const PointGeometry& pg) { return pg.tangent_frame.leftCols(wc.base_dim); }

/// Coefficient field of the i-th Gram-Schmidt frame vector of the base
/// directions; it only depends on the base parameters when the metric is warped.
TangentField base_frame_field(const WarpedChart& wc, int i) {
  return {[&wc, i](const Vec& x) -> Vec {
    const Mat jb = wc.chart.jacobian(x).leftCols(wc.base_dim);
    const Mat q = gram_schmidt(jb);
    const Mat r = q.transpose() * jb;
    const Mat rinv = r.triangularView<Eigen::Upper>().solve(Mat::Identity(wc.base_dim, wc.base_dim));
    Vec u = Vec::Zero(wc.chart.dim());
    u.head(wc.base_dim) = rinv.col(i);
    return u;
  }};
}

Vec warp_gradient(const WarpedChart& wc, const Vec& x) { return wc.warp.jet(x).gradient; }

}  // namespace

WarpMetricDefect warp_metric_defect(const WarpedChart& wc, const Vec& x) {
  const int nb = wc.base_dim;
  const int nf = wc.fiber_dim();
  const Mat jac = wc.chart.jacobian(x);
  const Mat g = jac.transpose() * jac;
  WarpMetricDefect d;
  d.off_diagonal = max_abs(g.topRightCorner(nb, nf));
  const auto jet = wc.warp.jet(x);
  d.warp_positive = jet.value;
  d.fiber_block = max_abs(g.bottomRightCorner(nf, nf) - jet.value * jet.value * fiber_metric(wc, x));
  d.warp_fiber_gradient = max_abs(jet.gradient.tail(nf));
  return d;
}

void require_warped_form(const WarpedChart& wc, const Vec& x) {
  const auto d = warp_metric_defect(wc, x);
  if (!(d.warp_positive > 0.0))
    throw ContractViolation("warping function not positive at x = " + point_text(x));
  if (d.warp_fiber_gradient > 1e-12)
    throw ContractViolation("warping function depends on fiber parameters at x = " + point_text(x));
  if (d.off_diagonal > 1e-8)
    throw ContractViolation("induced metric is not block diagonal at x = " + point_text(x));
  if (d.fiber_block > 1e-6)
    throw ContractViolation("fiber block differs from f^2 g_F at x = " + point_text(x));
}

bool is_trivial_warp(const WarpedChart& wc, const std::vector<Vec>& grid, double tol) {
  return std::all_of(grid.begin(), grid.end(),
                     [&](const Vec& x) { return max_abs(warp_gradient(wc, x)) <= tol; });
}

double sectional_curvature(const PointGeometry& pg, const Vec& X, const Vec& Y) {
  const double area = X.squaredNorm() * Y.squaredNorm() - std::pow(X.dot(Y), 2);
  if (area <= 0.0) throw ContractViolation("sectional curvature needs independent vectors");
  const Vec hxy = pg.sff(X, Y);
  return (pg.sff(X, X).dot(pg.sff(Y, Y)) - hxy.squaredNorm()) / area;
}

double warp_laplacian_frame(const WarpedChart& wc, const Vec& x) {
  const ImmersionChart& chart = wc.chart;
  const Vec grad = warp_gradient(wc, x);
  double lap = 0.0;
  for (int i = 0; i < wc.base_dim; ++i) {
    const TangentField e = base_frame_field(wc, i);
    const Vec nabla_ee = nabla(chart, e, ambient_field(chart, e), x);
    const PointGeometry pg = frame_at(chart, x);
    const double nabla_term = grad.dot(pg.coordinate_coeffs(nabla_ee));
    const std::function<double(const Vec&)> ef = [&wc, &e](const Vec& y) { return e(y).dot(warp_gradient(wc, y)); };
    const Vec u = e(x);
    const double second = (ef(x + kFieldStep * u) - ef(x - kFieldStep * u)) / (2 * kFieldStep);
    lap += nabla_term - second;
  }
  return lap;
}

double warp_laplacian_divergence(const WarpedChart& wc, const Vec& x) {
  const int nb = wc.base_dim;
  auto metric = [&wc, nb](const Vec& y) {
    const Mat jb = wc.chart.jacobian(y).leftCols(nb);
    return Mat(jb.transpose() * jb);
  };
  auto flux = [&](const Vec& y) -> Vec {
    const Mat g = metric(y);
    const double sq = std::sqrt(g.determinant());
    return sq * g.ldlt().solve(Vec(warp_gradient(wc, y).head(nb)));
  };
  double div = 0.0;
  for (int i = 0; i < nb; ++i) {
    const Vec e = Vec::Unit(x.size(), i);
    div += (flux(x + kFieldStep * e)[i] - flux(x - kFieldStep * e)[i]) / (2 * kFieldStep);
  }
  return -div / std::sqrt(metric(x).determinant());
}

WarpIdentityResiduals warp_identity_residuals(const WarpedChart& wc, const Vec& x) {
  require_warped_form(wc, x);
  const ImmersionChart& chart = wc.chart;
  const PointGeometry pg = second_fundamental_form(chart, x);
  const LogWarp lw = log_warp(wc, pg);
  const int nb = wc.base_dim;
  const int n = chart.dim();
  WarpIdentityResiduals out;

  // Lifts of coordinate fields: nabla_{d_b} d_t is the tangential part of
  // the mixed second derivative, exact from the jets.
  for (int i = 0; i < nb; ++i)
    for (int j = nb; j < n; ++j) {
      const Vec X = pg.jacobian.col(i);
      const Vec Y = pg.jacobian.col(j);
      const Vec nxy = pg.tangent_projector * pg.coordinate_second_derivative(i, j);
      const double xlnf = X.dot(lw.gradient);
      out.connection = std::max(out.connection, (nxy - xlnf * Y).norm() / (X.norm() * Y.norm()));
    }

  const Mat fib = fiber_frame(wc, pg);
  const Mat base = base_frame(wc, pg);
  const Vec grad = warp_gradient(wc, x);
  for (int i = 0; i < nb; ++i) {
    const double gii = pg.jacobian.col(i).norm();
    const TangentField X{[&wc, i](const Vec& y) -> Vec {
      Vec u = Vec::Zero(wc.chart.dim());
      u[i] = 1.0 / wc.chart.jacobian(y).col(i).norm();
      return u;
    }};
    const Vec xa = pg.jacobian.col(i) / gii;
    const Vec nabla_xx = nabla(chart, X, ambient_field(chart, X), x);
    const double nabla_term = grad.dot(pg.coordinate_coeffs(nabla_xx));
    const std::function<double(const Vec&)> xf = [&wc, &X](const Vec& y) { return X(y).dot(warp_gradient(wc, y)); };
    const Vec u = X(x);
    const double second = (xf(x + kFieldStep * u) - xf(x - kFieldStep * u)) / (2 * kFieldStep);
    const double predicted = (nabla_term - second) / lw.f;
    for (int j = 0; j < fib.cols(); ++j)
      out.sectional = std::max(out.sectional, std::abs(sectional_curvature(pg, xa, fib.col(j)) - predicted));
  }

  const double lap_frame = warp_laplacian_frame(wc, x);
  const double lap_div = warp_laplacian_divergence(wc, x);
  out.laplacian = std::abs(lap_frame - lap_div);
  for (int j = 0; j < fib.cols(); ++j) {
    double sum = 0.0;
    for (int i = 0; i < nb; ++i) sum += sectional_curvature(pg, base.col(i), fib.col(j));
    out.curvature_sum = std::max(out.curvature_sum, std::abs(lap_frame / lw.f - sum));
  }
  return out;
}

double WarpedLemmaResiduals::max() const {
  return std::max({symmetric_shape, phi_shape_1, phi_shape_2, base_normal, mixed});
}

std::optional<std::string> warped_hypotheses_failure(const WarpedChart& wc, const Vec& x) {
  try {
    require_warped_form(wc, x);
  } catch (const ContractViolation& e) {
    return std::string(e.what());
  }
  const PointGeometry pg = frame_at(wc.chart, x);
  const SlantAnalysis sa = analyze(pg, wc.chart.basis());
  if (sa.non_conforming()) return std::string("not pointwise almost h-semi-slant");
  if (!sa.shared_d1) return std::string("D1 differs between I, J, K");
  const int nb = wc.base_dim;
  const int n = wc.chart.dim();
  Mat base_proj = Mat::Zero(n, n);
  base_proj.topLeftCorner(nb, nb).setIdentity();
  if (max_abs(sa[Structure::I].split.d1_projector - base_proj) > 1e-8)
    return std::string("TB does not coincide with D1");
  if (nb % 4 != 0) return std::string("dim B is not a multiple of 4");
  if (wc.fiber_dim() % 2 != 0) return std::string("dim F is odd");
  for (const auto& p : sa.per) {
    const auto& th = p.split.theta;
    if (!th || *th < 1e-3) return std::string("slant function vanishes for ") + std::string(to_string(p.which));
  }
  if (!sa.proper) return std::string("not proper (some slant function equals pi/2)");
  return std::nullopt;
}

WarpedLemmaResiduals warped_lemma_residuals(const WarpedChart& wc, const Vec& x, Structure r, Rng& rng) {
  const PointGeometry pg = second_fundamental_form(wc.chart, x);
  const LogWarp lw = log_warp(wc, pg);
  const Mat rm = wc.chart.basis().matrix(r, pg.p);
  const Mat& t = pg.tangent_projector;
  const Mat& nn = pg.normal_projector;
  const double theta = *split_distributions(decompose(pg, wc.chart.basis(), r)).theta;
  const double cos2 = std::pow(std::cos(theta), 2);
  const Mat fib = fiber_frame(wc, pg);
  const Mat base = base_frame(wc, pg);
  auto lnf = [&](const Vec& v) { return v.dot(lw.gradient); };

  WarpedLemmaResiduals out;
  for (int trial = 0; trial < 3; ++trial) {
    const Vec V = fib * rng.unit_vector(fib.cols());
    const Vec W = fib * rng.unit_vector(fib.cols());
    const Vec X = base * rng.unit_vector(base.cols());
    const Vec Y = base * rng.unit_vector(base.cols());
    const Vec RX = t * rm * X;
    const Vec wV = nn * rm * V;
    const Vec wW = nn * rm * W;
    const Vec phiW = t * rm * W;
    out.symmetric_shape =
        std::max(out.symmetric_shape, std::abs(pg.shape_apply(wV, W).dot(X) - pg.shape_apply(wW, V).dot(X)));
    const double lhs2 = pg.shape_apply(nn * rm * phiW, V).dot(X);
    const double rhs2 = -lnf(RX) * phiW.dot(V) - lnf(X) * cos2 * V.dot(W);
    out.phi_shape_1 = std::max(out.phi_shape_1, std::abs(lhs2 - rhs2));
    const double lhs3 = pg.shape_apply(wW, V).dot(RX);
    const double rhs3 = lnf(X) * W.dot(V) + lnf(RX) * V.dot(phiW);
    out.phi_shape_2 = std::max(out.phi_shape_2, std::abs(lhs3 - rhs3));
    out.base_normal = std::max(out.base_normal, std::abs(pg.sff(X, Y).dot(wV)));
    const double lhs5 = pg.sff(X, V).dot(wW);
    const double rhs5 = -lnf(RX) * V.dot(W) + lnf(X) * V.dot(phiW);
    out.mixed = std::max(out.mixed, std::abs(lhs5 - rhs5));
  }
  return out;
}

InequalityTerms inequality_terms(const WarpedChart& wc, const Vec& x, Structure r) {
  const PointGeometry pg = second_fundamental_form(wc.chart, x);
  const LogWarp lw = log_warp(wc, pg);
  const double theta = *split_distributions(decompose(pg, wc.chart.basis(), r)).theta;
  const int n2 = wc.fiber_dim() / 2;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  InequalityTerms out;
  out.lhs = sff_norm_squared(pg);
  out.rhs = 4.0 * n2 * (1.0 / (s * s) + (c * c) / (s * s)) * lw.gradient.squaredNorm();
  const Mat fib = fiber_frame(wc, pg);
  for (int i = 0; i < fib.cols(); ++i)
    for (int j = 0; j < fib.cols(); ++j)
      for (int k = 0; k < pg.codim(); ++k)
        out.fiber_normal_defect =
            std::max(out.fiber_normal_defect, std::abs(pg.sff(fib.col(i), fib.col(j)).dot(pg.normal_frame.col(k))));
  out.mean_curvature = pg.mean_curvature.norm();
  return out;
}

FrameLevelInstance FrameLevelInstance::random(Rng& rng, int n1, int n2, Structure which) {
  FrameLevelInstance inst;
  inst.theta = rng.uniform(0.1, 1.4);
  inst.n1 = n1;
  inst.n2 = n2;
  inst.which = which;
  inst.grad_lnf = rng.normal_vector(4 * n1);
  const int d = 2 * n2;
  inst.coeffs.assign(d, std::vector<std::vector<double>>(d, std::vector<double>(d, 0.0)));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double c = rng.normal();
        inst.coeffs[i][j][k] = c;
        inst.coeffs[j][i][k] = c;
      }
  return inst;
}

FrameLevelInstance FrameLevelInstance::zero(double theta, int n1, int n2, Vec grad_lnf) {
  FrameLevelInstance inst;
  inst.theta = theta;
  inst.n1 = n1;
  inst.n2 = n2;
  inst.grad_lnf = std::move(grad_lnf);
  const int d = 2 * n2;
  inst.coeffs.assign(d, std::vector<std::vector<double>>(d, std::vector<double>(d, 0.0)));
  return inst;
}

double FrameLevelInstance::coeff_square_sum() const {
  double s = 0.0;
  for (const auto& a : coeffs)
    for (const auto& b : a)
      for (double c : b) s += c * c;
  return s;
}

FrameLevelResult frame_level_expansion(const FrameLevelInstance& inst) {
  if (!(inst.theta > 0.0 && inst.theta < M_PI / 2))
    throw DomainError("frame-level instance needs theta strictly inside (0, pi/2)");
  if (inst.n1 < 1 || inst.n2 < 1) throw InvalidDimension("frame-level instance needs n1, n2 >= 1");
  if (inst.grad_lnf.size() != 4 * inst.n1) throw InvalidDimension("grad ln f must have length 4 n1");
  const int d = 2 * inst.n2;
  if (static_cast<int>(inst.coeffs.size()) != d) throw InvalidDimension("fiber coefficients must be 2n2 x 2n2 x 2n2");
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        if (inst.coeffs[i][j][k] != inst.coeffs[j][i][k])
          throw ContractViolation("fiber coefficients must be symmetric in the first two indices");

  const int m = inst.n1 + inst.n2;
  const int amb = 4 * m;
  const QuaternionicBasis basis = QuaternionicBasis::standard(m);
  const Vec origin = Vec::Zero(amb);
  const Mat rm = basis.matrix(inst.which, origin);
  // A structure anticommuting with R supplies the out-of-plane direction.
  const Structure other = inst.which == Structure::I ? Structure::J : Structure::I;
  const Mat om = basis.matrix(other, origin);
  const double s = std::sin(inst.theta);
  const double c = std::cos(inst.theta);

  const int nb = 4 * inst.n1;
  Mat e = Mat::Zero(amb, nb);
  for (int i = 0; i < nb; ++i) e(i, i) = 1.0;
  Mat f(amb, d);
  Mat w(amb, d);
  for (int j = 0; j < inst.n2; ++j) {
    const Vec a = Vec::Unit(amb, 4 * (inst.n1 + j));
    const Vec out_of_plane = om * a;
    f.col(j) = a;
    f.col(inst.n2 + j) = c * (rm * a) + s * out_of_plane;
  }
  Mat tangent(amb, nb + d);
  tangent << e, f;
  const Mat tproj = tangent * tangent.transpose();
  const Mat nproj = Mat::Identity(amb, amb) - tproj;
  // phi = T R, omega = N R on the constructed tangent space.
  for (int k = 0; k < d; ++k) w.col(k) = nproj * rm * f.col(k) / s;

  Mat frame(amb, nb + 2 * d);
  frame << e, f, w;
  FrameLevelResult out;
  out.frame_defect = max_abs(frame.transpose() * frame - Mat::Identity(nb + 2 * d, nb + 2 * d));

  const Vec grad = e * inst.grad_lnf;
  const int n = nb + d;
  std::vector<std::vector<Vec>> h(n, std::vector<Vec>(n, Vec::Zero(amb)));
  for (int i = 0; i < nb; ++i) {
    const double xlnf = e.col(i).dot(grad);
    const double rxlnf = (rm * e.col(i)).dot(grad);
    for (int j = 0; j < d; ++j) {
      Vec v = Vec::Zero(amb);
      for (int k = 0; k < d; ++k) {
        const double coeff =
            (-rxlnf * f.col(j).dot(f.col(k)) + xlnf * f.col(j).dot(tproj * rm * f.col(k))) / s;
        v += coeff * w.col(k);
      }
      h[i][nb + j] = v;
      h[nb + j][i] = v;
    }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      Vec v = Vec::Zero(amb);
      for (int k = 0; k < d; ++k) v += inst.coeffs[i][j][k] * w.col(k);
      h[nb + i][nb + j] = v;
    }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out.lhs += h[a][b].squaredNorm();
  out.rhs = 4.0 * inst.n2 * (1.0 / (s * s) + (c * c) / (s * s)) * grad.squaredNorm();
  out.gap = out.lhs - out.rhs;
  return out;
}

std::array<double, 2> orthogonality_sums(const QuaternionicBasis& basis, Structure r, const Vec& v) {
  if (v.size() != basis.dim()) throw InvalidDimension("vector length differs from the ambient dimension");
  const Mat rm = basis.matrix(r, Vec::Zero(basis.dim()));
  double cross = 0.0;
  double square = 0.0;
  for (int i = 0; i < basis.dim(); ++i) {
    const Vec ei = Vec::Unit(basis.dim(), i);
    const double rei = (rm * ei).dot(v);
    cross += rei * ei.dot(v);
    square += rei * rei;
  }
  return {cross, square - v.squaredNorm()};
}

}  // namespace slantlab
