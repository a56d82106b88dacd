#pragma once

// Hyperkähler structures on R^{4m}.
//
// Indexing: documentation and reports use the 1-based coordinates
// y1..y4m; matrices and vectors are 0-based, so y_k is entry k-1.

#include "slantlab/expr.hpp"
#include "slantlab/linalg.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace slantlab {

enum class Structure { I, J, K };

inline constexpr std::array<Structure, 3> kStructures{Structure::I, Structure::J, Structure::K};

std::string_view to_string(Structure s);

inline int index_of(Structure s) { return static_cast<int>(s); }

/// Scalar field f over ambient points used to rotate (I, J) by an angle.
struct AngleField {
  std::function<double(const Vec&)> eval;
  bool constant = false;
  std::string description;

  static AngleField constant_value(double angle);
  /// Expression over ambient coordinates y1..y4m.
  static AngleField from_expression(const expr::Expression& e);
};

/// A triple (I, J, K) of orthogonal complex structures obeying IJ = K,
/// possibly rotated pointwise: (cos f I - sin f J, sin f I + cos f J, K).
class QuaternionicBasis {
 public:
  /// The block structures acting on each 4-block y_{4k+1..4k+4}.
  static QuaternionicBasis standard(int m);

  /// Rotates I and J by the angle field f, which must take values in [0, pi/2].
  static QuaternionicBasis rotated(const QuaternionicBasis& base, AngleField f);

  int dim() const { return static_cast<int>(i_.rows()); }
  int quaternionic_dim() const { return dim() / 4; }

  bool is_rotated() const { return angle_.has_value(); }

  /// True when the triple is constant over the ambient space (hence parallel
  /// for the flat connection).
  bool is_parallel() const { return !angle_ || angle_->constant; }

  /// Rotation angle at p; throws DomainError outside [0, pi/2].
  std::optional<double> angle_at(const Vec& p) const;

  /// True where sin f or cos f drops below 1e-9, i.e. the rotated pair
  /// collapses onto one of I, J.
  bool degenerate_rotation_at(const Vec& p) const;

  Mat matrix(Structure s, const Vec& p) const;
  Vec apply(Structure s, const Vec& p, const Vec& v) const;

  /// Unrotated matrices.
  const Mat& base_matrix(Structure s) const;

  const std::string& description() const { return description_; }

 private:
  Mat i_, j_, k_;
  std::optional<AngleField> angle_;
  std::string description_;
};

/// Largest entrywise defect of I^2 = J^2 = K^2 = -Id, IJ = -JI = K (and
/// cyclic) and R^T R = Id at a point.
double quaternion_relation_defect(const QuaternionicBasis& basis, const Vec& p);

}  // namespace slantlab
