#pragma once

// Warped products B x_f F immersed in R^{4m}, their metric identities, and
// the lower bound for ||h||^2 in terms of the warping function.

#include "slantlab/calculus.hpp"
#include "slantlab/expr.hpp"
#include "slantlab/geometry.hpp"
#include "slantlab/slant.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace slantlab {

/// A chart Phi(b, t) whose first `base_dim` parameters describe B and whose
/// remaining ones describe F.  `fiber_components` parameterize a model of F
/// (over the fiber parameters) whose metric g_F the fiber block must equal
/// after scaling by f^2.  `warp` is an expression over all chart parameters
/// that must not depend on the fiber ones.
struct WarpedChart {
  ImmersionChart chart;
  int base_dim = 0;
  expr::Expression warp;
  std::vector<expr::Expression> fiber_components;

  int fiber_dim() const { return chart.dim() - base_dim; }
  Vec base_part(const Vec& x) const { return x.head(base_dim); }
  Vec fiber_part(const Vec& x) const { return x.tail(fiber_dim()); }
};

struct WarpMetricDefect {
  double off_diagonal = 0.0;   // |<d_b Phi, d_t Phi>|
  double fiber_block = 0.0;    // |g_FF - f^2 g_F| (entrywise)
  double warp_positive = 1.0;  // f value (must be > 0)
  double warp_fiber_gradient = 0.0;
};

/// Block-structure defects of the induced metric at x.
WarpMetricDefect warp_metric_defect(const WarpedChart& wc, const Vec& x);

/// Throws ContractViolation naming x when the warped block form fails
/// (1e-8 off-diagonal, 1e-6 fiber block, f > 0).
void require_warped_form(const WarpedChart& wc, const Vec& x);

bool is_trivial_warp(const WarpedChart& wc, const std::vector<Vec>& grid, double tol = 1e-9);

struct WarpIdentityResiduals {
  double connection = 0.0;  // nabla_X Y - (X ln f) Y and nabla_Y X - (X ln f) Y
  double sectional = 0.0;   // K(X ^ Y) - ((nabla_X X) f - X^2 f) / f
  double laplacian = 0.0;   // frame sum vs coordinate divergence formula
  double curvature_sum = 0.0;  // Delta f / f - sum_i K(e_i ^ e_j) for each fiber e_j
};

WarpIdentityResiduals warp_identity_residuals(const WarpedChart& wc, const Vec& x);

/// Positive Laplacian of f on B: sum_i ((nabla_{e_i} e_i) f - e_i^2 f).
double warp_laplacian_frame(const WarpedChart& wc, const Vec& x);
/// Same quantity from -(1/sqrt g) d_i(sqrt g g^{ij} d_j f).
double warp_laplacian_divergence(const WarpedChart& wc, const Vec& x);

/// Sectional curvature of span{X, Y} from the Gauss equation in flat space.
double sectional_curvature(const PointGeometry& pg, const Vec& X, const Vec& Y);

struct WarpedLemmaResiduals {
  double symmetric_shape = 0.0;   // <A_{wV} W - A_{wW} V, X>
  double phi_shape_1 = 0.0;       // <A_{w phi W} V, X> identity
  double phi_shape_2 = 0.0;       // companion identity
  double base_normal = 0.0;       // <h(X, Y), omega V>
  double mixed = 0.0;             // <h(X,V), omega W> + (RX ln f) <V,W> - (X ln f) <V, phi W>

  double max() const;
};

/// Why a chart does not meet the h-semi-slant warped hypotheses at x
/// (TB = D1 shared by I, J, K; TF = D2), or nullopt when it does.
std::optional<std::string> warped_hypotheses_failure(const WarpedChart& wc, const Vec& x);

WarpedLemmaResiduals warped_lemma_residuals(const WarpedChart& wc, const Vec& x, Structure r, Rng& rng);

struct InequalityTerms {
  double lhs = 0.0;  // ||h||^2
  double rhs = 0.0;  // 4 n2 (csc^2 + cot^2) ||grad ln f||^2
  double gap() const { return lhs - rhs; }
  double fiber_normal_defect = 0.0;  // max |<h(V,W), Z>| for fiber V, W and Z in omega(D2)
  double mean_curvature = 0.0;
};

InequalityTerms inequality_terms(const WarpedChart& wc, const Vec& x, Structure r);

/// Pointwise data of the adapted-frame expansion.
struct FrameLevelInstance {
  double theta = M_PI / 4;
  int n1 = 1;
  int n2 = 1;
  Structure which = Structure::I;
  Vec grad_lnf;  // length 4 n1
  /// coeffs[i][j][k] = <h(f_i, f_j), w_k>, i, j, k < 2 n2, symmetric in (i, j).
  std::vector<std::vector<std::vector<double>>> coeffs;

  static FrameLevelInstance random(Rng& rng, int n1, int n2, Structure which);
  static FrameLevelInstance zero(double theta, int n1, int n2, Vec grad_lnf);
  double coeff_square_sum() const;
};

struct FrameLevelResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double frame_defect = 0.0;  // orthonormality of the constructed frame
};

/// Builds the adapted frame in R^{4(n1+n2)} for the instance, assembles h from
/// the mixed-term identity and the free fiber coefficients, and sums ||h||^2
/// over all ordered frame pairs.
FrameLevelResult frame_level_expansion(const FrameLevelInstance& inst);

/// sum_i <R e_i, v><e_i, v> and sum_i <R e_i, v>^2 - |v|^2 over the standard
/// basis of R^{4 n1}; both vanish identically.
std::array<double, 2> orthogonality_sums(const QuaternionicBasis& basis, Structure r, const Vec& v);

}  // namespace slantlab
