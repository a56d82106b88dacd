#include "slantlab/slant.hpp"

#include "slantlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace slantlab {

std::string_view to_string(SplitClass c) {
  switch (c) {
    case SplitClass::Slant: return "slant";
    case SplitClass::SemiSlant: return "semi-slant";
    case SplitClass::SemiInvariant: return "semi-invariant";
    case SplitClass::SplitAmbiguous: return "split-ambiguous";
    case SplitClass::NonConforming: return "non-conforming";
  }
  return "?";
}

StructureTensors decompose(const PointGeometry& pg, const QuaternionicBasis& basis, Structure r) {
  const Mat rm = basis.matrix(r, pg.p);
  const Mat& e = pg.tangent_frame;
  const Mat& nf = pg.normal_frame;
  StructureTensors t;
  t.phi = e.transpose() * rm * e;
  t.omega = nf.transpose() * rm * e;
  t.b = e.transpose() * rm * nf;
  t.c = nf.transpose() * rm * nf;
  return t;
}

double slant_angle(const StructureTensors& t, const Vec& x_frame) {
  if (std::abs(x_frame.norm() - 1.0) > 1e-10) throw ContractViolation("slant_angle expects a unit vector");
  return std::acos(std::clamp((t.phi * x_frame).norm(), 0.0, 1.0));
}

Split split_distributions(const StructureTensors& t, double cluster_tol) {
  const int n = static_cast<int>(t.phi.cols());
  const Mat s = t.phi.transpose() * t.phi;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (s + s.transpose()));
  const Vec& ev = es.eigenvalues();
  const Mat& v = es.eigenvectors();

  Split out;
  out.eigenvalues.assign(ev.data(), ev.data() + n);
  int k = n;  // eigenvalues [k, n) form the invariant cluster
  while (k > 0 && ev[k - 1] >= 1.0 - cluster_tol) --k;
  out.d2_basis = v.leftCols(k);
  out.d1_basis = v.rightCols(n - k);
  out.d1_projector = out.d1_basis * out.d1_basis.transpose();
  out.d2_projector = out.d2_basis * out.d2_basis.transpose();

  if (k == 0) {
    out.cls = SplitClass::SplitAmbiguous;
    out.theta = 0.0;
  } else {
    int start = 0;
    out.cluster_count = 1;
    for (int i = 1; i < k; ++i)
      if (ev[i] - ev[start] > cluster_tol) {
        ++out.cluster_count;
        start = i;
      }
    out.d2_spread = ev[k - 1] - ev[0];
    if (out.cluster_count > 1) {
      out.cls = SplitClass::NonConforming;
    } else {
      // Singular values of phi on D2 rather than sqrt of the eigenvalues:
      // near theta = pi/2 the eigenvalues are O(cos^2) and lose precision.
      double mean_cos = 0.0;
      for (int i = 0; i < k; ++i) mean_cos += (t.phi * v.col(i)).norm();
      mean_cos /= k;
      out.theta = std::acos(std::clamp(mean_cos, 0.0, 1.0));
      if (n - k == 0)
        out.cls = SplitClass::Slant;
      else if (ev[k - 1] <= cluster_tol)
        out.cls = SplitClass::SemiInvariant;
      else
        out.cls = SplitClass::SemiSlant;
    }
    out.odd_d2 = k % 2 == 1;
  }

  if (t.omega.rows() > 0) {
    Eigen::JacobiSVD<Mat> svd(t.omega);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-8) ++rank;
    out.mu_dim = static_cast<int>(t.omega.rows()) - rank;
  }
  return out;
}

SlantAnalysis analyze(const PointGeometry& pg, const QuaternionicBasis& basis, double cluster_tol) {
  SlantAnalysis sa;
  for (Structure r : kStructures) {
    auto& pr = sa.per[index_of(r)];
    pr.which = r;
    pr.tensors = decompose(pg, basis, r);
    pr.split = split_distributions(pr.tensors, cluster_tol);
  }
  const auto& si = sa.per[0].split;
  sa.shared_d1 = true;
  sa.equal_angles = true;
  sa.proper = true;
  for (const auto& pr : sa.per) {
    const auto& sp = pr.split;
    if (sp.d1_dim() != si.d1_dim() || max_abs(sp.d1_projector - si.d1_projector) > 1e-8) sa.shared_d1 = false;
    if (!sp.theta || !si.theta || std::abs(*sp.theta - *si.theta) > 1e-8) sa.equal_angles = false;
    if (!sp.theta || std::cos(*sp.theta) < 1e-6) sa.proper = false;
  }
  sa.degenerate_rotation = basis.degenerate_rotation_at(pg.p);
  return sa;
}

bool SlantAnalysis::almost_h_slant() const {
  return std::all_of(per.begin(), per.end(), [](const StructureAnalysis& p) {
    return p.split.cls == SplitClass::Slant || p.split.cls == SplitClass::SplitAmbiguous;
  });
}

bool SlantAnalysis::almost_h_semi_slant() const {
  return std::none_of(per.begin(), per.end(),
                      [](const StructureAnalysis& p) { return p.split.cls == SplitClass::NonConforming; });
}

bool SlantAnalysis::split_ambiguous() const {
  return std::any_of(per.begin(), per.end(),
                     [](const StructureAnalysis& p) { return p.split.cls == SplitClass::SplitAmbiguous; });
}

bool SlantAnalysis::non_conforming() const { return !almost_h_semi_slant(); }

std::vector<std::string> SlantAnalysis::labels() const {
  std::vector<std::string> out;
  const bool all_right_angle = std::all_of(per.begin(), per.end(), [](const StructureAnalysis& p) {
    return p.split.theta && std::abs(*p.split.theta - M_PI / 2) <= 1e-8;
  });
  if (almost_h_slant()) {
    out.emplace_back("almost-h-slant");
    if (equal_angles) out.emplace_back("h-slant");
  }
  if (almost_h_semi_slant()) {
    out.emplace_back("almost-h-semi-slant");
    if (shared_d1) {
      out.emplace_back("h-semi-slant");
      if (equal_angles) out.emplace_back("strictly-h-semi-slant");
    }
    if (all_right_angle) out.emplace_back(shared_d1 ? "h-semi-invariant" : "almost-h-semi-invariant");
  } else {
    out.emplace_back("non-conforming");
  }
  if (proper) out.emplace_back("proper");
  if (split_ambiguous()) out.emplace_back("split-ambiguous");
  if (degenerate_rotation) out.emplace_back("degenerate-rotation");
  for (const auto& p : per) {
    out.push_back(std::string(to_string(p.which)) + ":" + std::string(to_string(p.split.cls)));
    if (p.split.odd_d2) out.push_back(std::string(to_string(p.which)) + ":odd-d2");
  }
  return out;
}

double decomposition_identity_residual(const StructureTensors& t) {
  const int n = static_cast<int>(t.phi.rows());
  const int q = static_cast<int>(t.c.rows());
  double r = max_abs(t.phi * t.phi + t.b * t.omega + Mat::Identity(n, n));
  if (q > 0) {
    r = std::max(r, max_abs(t.c * t.c + t.omega * t.b + Mat::Identity(q, q)));
    r = std::max(r, max_abs(t.omega * t.phi + t.c * t.omega));
    r = std::max(r, max_abs(t.b * t.c + t.phi * t.b));
  }
  return r;
}

std::array<std::optional<double>, 3> slant_angles_with_metric(const PointGeometry& pg, const QuaternionicBasis& basis,
                                                              double scale, double cluster_tol) {
  if (!(scale > 0.0)) throw DomainError("metric scale must be positive");
  const int amb = pg.ambient_dim();
  const Mat g = scale * Mat::Identity(amb, amb);
  // Gram-Schmidt in the scaled inner product.
  Mat e = pg.jacobian;
  for (int j = 0; j < e.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) e.col(j) -= (e.col(k).dot(g * e.col(j))) * e.col(k);
    e.col(j) /= std::sqrt(e.col(j).dot(g * e.col(j)));
  }
  std::array<std::optional<double>, 3> out;
  for (Structure r : kStructures) {
    StructureTensors t;
    t.phi = e.transpose() * g * basis.matrix(r, pg.p) * e;
    t.omega = Mat(0, e.cols());
    const Split sp = split_distributions(t, cluster_tol);
    if (sp.cls != SplitClass::NonConforming) out[index_of(r)] = sp.theta;
  }
  return out;
}

}  // namespace slantlab
