#pragma once

// Vector fields along a chart and the derivative identities built from them.
//
// A TangentField is given by its coefficients u(x) in the coordinate fields,
// X = sum_i u_i(x) d_i Phi.  Derivatives of fields are central differences
// in parameter space; second fundamental forms stay exact.

#include "slantlab/geometry.hpp"
#include "slantlab/linalg.hpp"
#include "slantlab/slant.hpp"

#include <functional>

namespace slantlab {

inline constexpr double kFieldStep = 1e-5;

struct TangentField {
  std::function<Vec(const Vec&)> coeffs;

  Vec operator()(const Vec& x) const { return coeffs(x); }

  static TangentField coordinate(int i, int n);
  static TangentField constant(const Vec& u);
  /// u(x) = a + B x with entries drawn from N(0, scale^2).
  static TangentField random_affine(Rng& rng, int n, double scale = 1.0);
};

/// Ambient vector Jacobian(x) * u(x).
Vec ambient_vector(const ImmersionChart& chart, const TangentField& X, const Vec& x);
AmbientField ambient_field(const ImmersionChart& chart, const TangentField& X);

/// [X, Y] in coordinates: (Dv) u - (Du) v with (Dv)_{ji} = d_i v^j.
Vec lie_bracket(const TangentField& X, const TangentField& Y, const Vec& x, double step = kFieldStep);

/// Ambient derivative of W along X at x.
Vec along(const ImmersionChart& chart, const TangentField& X, const AmbientField& W, const Vec& x,
          double step = kFieldStep);

/// nabla_X W = tangential part of the ambient derivative (W tangent along M).
Vec nabla(const ImmersionChart& chart, const TangentField& X, const AmbientField& W, const Vec& x);

enum class Distribution { D1, D2 };

/// Ambient projector onto D1^R or D2^R at x (computed from the split of R).
Mat distribution_projector(const ImmersionChart& chart, const Vec& x, Structure r, Distribution d);

/// Field x -> coefficients of P_d(x) applied to the ambient vector of `base`.
TangentField distribution_field(const ImmersionChart& chart, Structure r, Distribution d, TangentField base);

/// phi_R Y and omega_R Y as ambient fields along M.
AmbientField phi_field(const ImmersionChart& chart, Structure r, const TangentField& Y);
AmbientField omega_field(const ImmersionChart& chart, Structure r, const TangentField& Y);

/// Smooth normal field: normal projection of the ambient field a + B x.
AmbientField random_normal_field(const ImmersionChart& chart, Rng& rng, double scale = 1.0);

/// (nabla_X phi_R) Y and (D_X omega_R) Y from their defining differences.
Vec nabla_phi(const ImmersionChart& chart, const TangentField& X, const TangentField& Y, const Vec& x, Structure r);
Vec d_omega(const ImmersionChart& chart, const TangentField& X, const TangentField& Y, const Vec& x, Structure r);

struct PhiOmegaResiduals {
  double nabla_phi = 0.0;  // (nabla_X phi)Y - A_{omega Y} X - B h(X,Y)
  double d_omega = 0.0;    // (D_X omega)Y + h(X, phi Y) - C h(X,Y)
  double b_part = 0.0;     // -phi A_Z X + B D_X Z - nabla_X(B Z) + A_{C Z} X
  double c_part = 0.0;     // -omega A_Z X + C D_X Z - h(X, B Z) - D_X(C Z)

  double max() const;
};

/// Requires a parallel basis; each side is evaluated independently.
PhiOmegaResiduals phi_omega_residuals(const ImmersionChart& chart, const TangentField& X, const TangentField& Y,
                                      const AmbientField& Z, const Vec& x, Structure r);

/// Omega_R(d_i, d_j) = <phi_R d_i Phi, d_j Phi> in the coordinate basis.
Mat omega_form(const ImmersionChart& chart, const Vec& x, Structure r);

/// d Omega_R(X, Y, Z) from the six-term invariant formula.
double d_omega_form(const ImmersionChart& chart, const Vec& x, Structure r, const TangentField& X,
                    const TangentField& Y, const TangentField& Z, double step = kFieldStep);

/// Gradient of a scalar function of parameters as an ambient tangent vector.
Vec tangent_gradient(const ImmersionChart& chart, const std::function<double(const Vec&)>& fn, const Vec& x,
                     double step = kFieldStep);

}  // namespace slantlab
