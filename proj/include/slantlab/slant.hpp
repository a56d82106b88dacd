#pragma once

// Decomposition tensors of R in {I, J, K} along a submanifold and the
// resulting invariant/slant splittings.
//
// All tangent quantities are expressed in the orthonormal tangent frame of
// the PointGeometry, normal quantities in its normal frame.

#include "slantlab/ambient.hpp"
#include "slantlab/geometry.hpp"
#include "slantlab/linalg.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace slantlab {

inline constexpr double kClusterTol = 1e-6;

/// R X = phi X + omega X for tangent X, R Z = b Z + c Z for normal Z.
struct StructureTensors {
  Mat phi;    // n x n
  Mat omega;  // (4m - n) x n
  Mat b;      // n x (4m - n)
  Mat c;      // (4m - n) x (4m - n)
};

StructureTensors decompose(const PointGeometry& pg, const QuaternionicBasis& basis, Structure r);

/// Angle between R X and the tangent space for a unit frame vector X.
double slant_angle(const StructureTensors& t, const Vec& x_frame);

enum class SplitClass {
  Slant,            // D1 empty, one eigenvalue cluster
  SemiSlant,        // D1 and a slant D2 with theta in (0, pi/2)
  SemiInvariant,    // D1 nonempty, theta = pi/2 on D2
  SplitAmbiguous,   // every eigenvalue within tolerance of 1 (theta -> 0)
  NonConforming,    // more than one cluster besides the invariant one
};

std::string_view to_string(SplitClass c);

struct Split {
  std::vector<double> eigenvalues;  // of phi^T phi, ascending
  Mat d1_basis;                     // n x dim D1, orthonormal
  Mat d2_basis;                     // n x dim D2, orthonormal
  Mat d1_projector;
  Mat d2_projector;
  std::optional<double> theta;  // slant angle on D2 (0 when D2 is empty)
  double d2_spread = 0.0;       // eigenvalue spread inside the D2 cluster
  int cluster_count = 0;        // clusters excluding the invariant one
  SplitClass cls = SplitClass::Slant;
  bool odd_d2 = false;
  int mu_dim = 0;

  int d1_dim() const { return static_cast<int>(d1_basis.cols()); }
  int d2_dim() const { return static_cast<int>(d2_basis.cols()); }
};

Split split_distributions(const StructureTensors& t, double cluster_tol = kClusterTol);

struct StructureAnalysis {
  Structure which;
  StructureTensors tensors;
  Split split;
};

struct SlantAnalysis {
  std::array<StructureAnalysis, 3> per;
  bool shared_d1 = false;     // D1^I = D1^J = D1^K within 1e-8
  bool equal_angles = false;  // theta_I = theta_J = theta_K within 1e-8
  bool proper = false;        // every theta_R < pi/2
  bool degenerate_rotation = false;

  const StructureAnalysis& operator[](Structure s) const { return per[index_of(s)]; }

  /// Classification labels, e.g. "almost-h-slant", "h-semi-slant", "proper".
  std::vector<std::string> labels() const;
  bool almost_h_slant() const;
  bool almost_h_semi_slant() const;
  bool h_semi_slant() const { return almost_h_semi_slant() && shared_d1; }
  bool split_ambiguous() const;
  bool non_conforming() const;
};

SlantAnalysis analyze(const PointGeometry& pg, const QuaternionicBasis& basis, double cluster_tol = kClusterTol);

/// Largest residual of phi^2 + b omega = -Id, c^2 + omega b = -Id,
/// omega phi + c omega = 0, b c + phi b = 0.
double decomposition_identity_residual(const StructureTensors& t);

/// Slant angles computed with the ambient metric G = scale * Id: the tangent
/// frame is rebuilt G-orthonormally before forming phi.  Returns per-R angles
/// (nullopt when the split is not a single slant cluster on D2).
std::array<std::optional<double>, 3> slant_angles_with_metric(const PointGeometry& pg, const QuaternionicBasis& basis,
                                                              double scale, double cluster_tol = kClusterTol);

}  // namespace slantlab
