#pragma once

// Pointwise extrinsic geometry of an immersion Phi: box in R^n -> R^{4m}.

#include "slantlab/ambient.hpp"
#include "slantlab/expr.hpp"
#include "slantlab/linalg.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace slantlab {

struct ParameterBox {
  Vec lower;
  Vec upper;

  bool contains(const Vec& x, double slack = 0.0) const;
  Vec center() const { return 0.5 * (lower + upper); }
};

/// Tensor grid with `resolution[i]` points along axis i, endpoints included,
/// enumerated with the first axis varying slowest.
std::vector<Vec> grid_points(const ParameterBox& box, const std::vector<int>& resolution);

class ImmersionChart {
 public:
  ImmersionChart(std::string name, std::vector<std::string> params, std::vector<expr::Expression> components,
                 ParameterBox domain, std::shared_ptr<const QuaternionicBasis> basis);

  /// Parses component sources against `params`.
  static ImmersionChart from_sources(std::string name, std::vector<std::string> params,
                                     const std::vector<std::string>& component_sources, ParameterBox domain,
                                     std::shared_ptr<const QuaternionicBasis> basis);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& params() const { return params_; }
  const std::vector<expr::Expression>& components() const { return components_; }
  const ParameterBox& domain() const { return domain_; }
  const QuaternionicBasis& basis() const { return *basis_; }
  std::shared_ptr<const QuaternionicBasis> basis_ptr() const { return basis_; }

  int dim() const { return static_cast<int>(params_.size()); }
  int ambient_dim() const { return static_cast<int>(components_.size()); }

  expr::VectorMapJet jets(const Vec& x) const;
  Vec point(const Vec& x) const;
  Mat jacobian(const Vec& x) const;

  /// Same chart over a different basis (used by rotated-structure runs).
  ImmersionChart with_basis(std::shared_ptr<const QuaternionicBasis> basis) const;

 private:
  std::string name_;
  std::vector<std::string> params_;
  std::vector<expr::Expression> components_;
  ParameterBox domain_;
  std::shared_ptr<const QuaternionicBasis> basis_;
};

/// Frames, projectors and (optionally) second fundamental form at one point.
struct PointGeometry {
  Vec x;
  Vec p;
  Mat jacobian;           // 4m x n, columns d_i Phi
  Mat tangent_frame;      // 4m x n, Gram-Schmidt of the Jacobian columns
  Mat normal_frame;       // 4m x (4m - n)
  Mat tangent_projector;  // 4m x 4m
  Mat normal_projector;
  Mat coordinate_to_frame;  // upper triangular; jacobian = tangent_frame * coordinate_to_frame

  bool has_sff = false;
  std::vector<Mat> coordinate_hessians;  // per component, n x n
  /// h(e_a, e_b) as ambient normal vectors, indexed [a][b].
  std::vector<std::vector<Vec>> h;
  Vec mean_curvature;

  int dim() const { return static_cast<int>(tangent_frame.cols()); }
  int ambient_dim() const { return static_cast<int>(tangent_frame.rows()); }
  int codim() const { return static_cast<int>(normal_frame.cols()); }

  /// Frame coefficients of an ambient tangent vector.
  Vec frame_coords(const Vec& tangent) const { return tangent_frame.transpose() * tangent; }

  /// Coordinate coefficients u with jacobian * u = tangent (least squares).
  Vec coordinate_coeffs(const Vec& tangent) const;

  /// h(X, Y) for ambient tangent vectors X, Y.
  Vec sff(const Vec& X, const Vec& Y) const;

  /// A_Z X as an ambient tangent vector.
  Vec shape_apply(const Vec& Z, const Vec& X) const;

  /// Ambient second derivative d_i d_j Phi.
  Vec coordinate_second_derivative(int i, int j) const;
};

/// Frames and projectors; throws DegenerateImmersion when the Jacobian's
/// singular value ratio drops below 1e-8.
PointGeometry frame_at(const ImmersionChart& chart, const Vec& x);

/// frame_at plus the second fundamental form and mean curvature vector.
PointGeometry second_fundamental_form(const ImmersionChart& chart, const Vec& x);

/// (A_Z)_{ab} = <h(e_a, e_b), Z>; Z must be normal to within 1e-8.
Mat shape_operator(const PointGeometry& pg, const Vec& Z);

double sff_norm_squared(const PointGeometry& pg);

/// An ambient vector attached to each parameter point.
using AmbientField = std::function<Vec(const Vec& x)>;

/// Derivative of W along the parameter direction u, by central differences.
Vec directional_derivative(const AmbientField& W, const Vec& x, const Vec& u, double step = 1e-5);

/// D_X Z for a normal field Z and a parameter direction u (X = jacobian * u).
/// Throws ContractViolation if Z is not normal to within 1e-6 on the stencil.
Vec normal_connection(const ImmersionChart& chart, const Vec& x, const Vec& u, const AmbientField& Z,
                      double step = 1e-5);

/// Gram-Schmidt (two passes) on the columns of `m` in column order.
Mat gram_schmidt(const Mat& m);

}  // namespace slantlab
