#include "doctest.h"

#include "slantlab/calculus.hpp"
#include "slantlab/catalog.hpp"
#include "slantlab/error.hpp"

using namespace slantlab;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) out[i++] = x;
  return out;
}

TangentField quadratic_field(Rng& rng, int n) {
  const Vec a = rng.normal_vector(n);
  const Vec b = rng.normal_vector(n);
  const Vec c = rng.normal_vector(n);
  return {[a, b, c](const Vec& x) -> Vec { return a + x.dot(b) * c + x.squaredNorm() * b; }};
}

}  // namespace

TEST_SUITE("calculus") {
  TEST_CASE("coordinate_fields_commute") {
    const auto e1 = TangentField::coordinate(0, 2), e2 = TangentField::coordinate(1, 2);
    CHECK(lie_bracket(e1, e2, vec({0.3, 0.4})).norm() == 0.0);
  }

  TEST_CASE("bracket_of_e1_and_x1_e2") {
    const auto e1 = TangentField::coordinate(0, 2);
    const TangentField y{[](const Vec& x) -> Vec { return vec({0, x[0]}); }};
    CHECK(max_abs(lie_bracket(e1, y, vec({0.7, -0.2})) - vec({0, 1})) < 1e-10);
  }

  TEST_CASE("bracket_of_affine_fields_is_exact") {
    // [a + Bx, c + Dx] = D(a + Bx) - B(c + Dx)
    Rng rng(2);
    const int n = 3;
    const Vec a = rng.normal_vector(n), c = rng.normal_vector(n);
    Mat B(n, n), D(n, n);
    for (int i = 0; i < n; ++i) {
      B.col(i) = rng.normal_vector(n);
      D.col(i) = rng.normal_vector(n);
    }
    const TangentField X{[=](const Vec& x) -> Vec { return a + B * x; }};
    const TangentField Y{[=](const Vec& x) -> Vec { return c + D * x; }};
    const Vec x = rng.normal_vector(n);
    CHECK(max_abs(lie_bracket(X, Y, x) - (D * (a + B * x) - B * (c + D * x))) < 1e-9);
  }

  TEST_CASE("bracket_antisymmetry_on_polynomial_fields") {
    Rng rng(4);
    for (int k = 0; k < 20; ++k) {
      const TangentField X = quadratic_field(rng, 3), Y = quadratic_field(rng, 3);
      const Vec x = rng.normal_vector(3) * 0.5;
      CHECK(max_abs(lie_bracket(X, Y, x) + lie_bracket(Y, X, x)) < 1e-7);
    }
  }

  TEST_CASE("phi_and_omega_are_parallel_on_linear_charts") {
    const auto cut = build_chart(catalog_chart("slant_plane(alpha=pi/5)"));
    Rng rng(6);
    for (Structure s : kStructures)
      for (int k = 0; k < 3; ++k) {
        const auto X = TangentField::random_affine(rng, 2), Y = TangentField::random_affine(rng, 2);
        const Vec x = cut.grid[k * 7];
        CHECK(nabla_phi(*cut.chart, X, Y, x, s).norm() < 1e-7);
        CHECK(d_omega(*cut.chart, X, Y, x, s).norm() < 1e-7);
      }
  }

  TEST_CASE("phi_omega_derivative_identities_on_curved_charts") {
    Rng rng(8);
    for (const char* name : {"curved_surface", "holomorphic_curve", "rotating_quaternionic_line", "sphere_patch"}) {
      const auto cut = build_chart(catalog_chart(name));
      double worst = 0.0;
      for (std::size_t i = 0; i < cut.grid.size(); i += 5)
        for (Structure s : kStructures) {
          const int n = cut.chart->dim();
          const auto X = TangentField::random_affine(rng, n, 0.5), Y = TangentField::random_affine(rng, n, 0.5);
          const auto Z = random_normal_field(*cut.chart, rng, 0.5);
          worst = std::max(worst, phi_omega_residuals(*cut.chart, X, Y, Z, cut.grid[i], s).max());
        }
      INFO(name);
      CHECK(worst < 1e-5);
    }
  }

  TEST_CASE("phi_omega_identities_need_a_parallel_basis") {
    const auto cut = build_chart(catalog_chart("example_7_6"));
    Rng rng(1);
    const auto X = TangentField::random_affine(rng, 6);
    CHECK_THROWS_AS(phi_omega_residuals(*cut.chart, X, X, random_normal_field(*cut.chart, rng), cut.grid[0],
                                        Structure::I),
                    ContractViolation);
  }

  TEST_CASE("slant_plane_two_form") {
    const auto cut = build_chart(catalog_chart("slant_plane(alpha=pi/3)"));
    const Mat om = omega_form(*cut.chart, cut.grid[4], Structure::I);
    CHECK(om(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(om(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
    Rng rng(3);
    const auto X = TangentField::random_affine(rng, 2), Y = TangentField::random_affine(rng, 2),
               Z = TangentField::random_affine(rng, 2);
    CHECK(std::abs(d_omega_form(*cut.chart, cut.grid[4], Structure::I, X, Y, Z)) < 1e-7);
  }

  TEST_CASE("two_form_vanishes_for_totally_real_structure") {
    const auto cut = build_chart(catalog_chart("example_7_5"));
    Rng rng(5);
    const auto X = TangentField::random_affine(rng, 4), Y = TangentField::random_affine(rng, 4),
               Z = TangentField::random_affine(rng, 4);
    for (const Vec& x : cut.grid) {
      CHECK(max_abs(omega_form(*cut.chart, x, Structure::J)) < 1e-14);
      CHECK(std::abs(d_omega_form(*cut.chart, x, Structure::J, X, Y, Z)) < 1e-10);
    }
  }

  TEST_CASE("two_forms_closed_on_curved_parallel_charts") {
    Rng rng(12);
    for (const char* name : {"holomorphic_curve", "curved_surface", "holomorphic_product", "sphere_s3"}) {
      const auto cut = build_chart(catalog_chart(name));
      const int n = cut.chart->dim();
      double worst = 0.0;
      for (const Vec& x : cut.grid)
        for (Structure s : kStructures) {
          const auto X = TangentField::random_affine(rng, n, 0.5), Y = TangentField::random_affine(rng, n, 0.5),
                     Z = TangentField::random_affine(rng, n, 0.5);
          worst = std::max(worst, std::abs(d_omega_form(*cut.chart, x, s, X, Y, Z)));
        }
      INFO(name);
      CHECK(worst < 1e-4);
    }
  }

  TEST_CASE("rotated_two_form_is_not_closed") {
    // Rotated chart with f = y3 = x4: Omega = cos f Omega_I - sin f Omega_J with
    // constant Omega_I, Omega_J, so d Omega = -df ^ (sin f Omega_I + cos f Omega_J).
    const auto rotated = build_chart(catalog_chart("example_7_6"));
    auto flat_spec = catalog_chart("example_7_6");
    flat_spec.rotation.reset();
    const auto flat = build_chart(flat_spec);
    Rng rng(13);
    double largest = 0.0;
    for (const Vec& x : rotated.grid) {
      const double f = x[3];
      const Mat wi = omega_form(*flat.chart, x, Structure::I), wj = omega_form(*flat.chart, x, Structure::J);
      const Mat da = -std::sin(f) * wi - std::cos(f) * wj;
      CHECK(max_abs(omega_form(*rotated.chart, x, Structure::I) - (std::cos(f) * wi - std::sin(f) * wj)) < 1e-14);
      for (int k = 0; k < 3; ++k) {
        const Vec u = rng.normal_vector(6), v = rng.normal_vector(6), w = rng.normal_vector(6);
        const double oracle = u[3] * v.dot(da * w) - v[3] * u.dot(da * w) + w[3] * u.dot(da * v);
        const double got = d_omega_form(*rotated.chart, x, Structure::I, TangentField::constant(u),
                                        TangentField::constant(v), TangentField::constant(w));
        CHECK(std::abs(got - oracle) < 1e-6);
        largest = std::max(largest, std::abs(got));
      }
      // X = d/dx4, Y = d/dx5, Z = d/dx2 picks -sin f
      const double picked =
          d_omega_form(*rotated.chart, x, Structure::I, TangentField::coordinate(3, 6), TangentField::coordinate(4, 6),
                       TangentField::coordinate(1, 6));
      CHECK(picked == doctest::Approx(-std::sin(f)).epsilon(1e-6));
    }
    CHECK(largest > 0.1);
  }

  TEST_CASE("tangent_gradient_of_a_coordinate") {
    const auto cut = build_chart(catalog_chart("graph_surface"));
    const Vec x = vec({0.2, -0.3});
    const Vec grad = tangent_gradient(*cut.chart, [](const Vec& y) { return y[0]; }, x);
    const Mat j = cut.chart->jacobian(x);
    const Vec oracle = j * (j.transpose() * j).inverse() * Vec::Unit(2, 0);
    CHECK(max_abs(grad - oracle) < 1e-9);
  }

  TEST_CASE("distribution_fields_stay_in_their_distribution") {
    const auto cut = build_chart(catalog_chart("rotating_quaternionic_line"));
    Rng rng(14);
    const auto base = TangentField::constant(rng.normal_vector(6));
    const auto X = distribution_field(*cut.chart, Structure::I, Distribution::D1, base);
    for (std::size_t i = 0; i < cut.grid.size(); i += 9) {
      const Vec& x = cut.grid[i];
      const Vec amb = cut.chart->jacobian(x) * X(x);
      for (Structure s : kStructures) {
        const Mat p2 = distribution_projector(*cut.chart, x, s, Distribution::D2);
        CHECK((p2 * amb).norm() < 1e-10);
      }
      CHECK(amb.norm() > 1e-3);
    }
  }
}
