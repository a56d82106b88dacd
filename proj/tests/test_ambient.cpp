#include "doctest.h"

#include "slantlab/ambient.hpp"
#include "slantlab/error.hpp"

using namespace slantlab;

TEST_SUITE("ambient") {
  TEST_CASE("standard_basis_relations_are_exact") {
    for (int m : {1, 2, 4}) {
      const auto b = QuaternionicBasis::standard(m);
      const Vec p = Vec::Zero(4 * m);
      const Mat id = Mat::Identity(4 * m, 4 * m);
      const Mat I = b.matrix(Structure::I, p), J = b.matrix(Structure::J, p), K = b.matrix(Structure::K, p);
      CHECK(I * I == -id);
      CHECK(J * J == -id);
      CHECK(K * K == -id);
      CHECK(I * J == K);
      CHECK(J * K == I);
      CHECK(K * I == J);
      CHECK(J * I == -K);
      CHECK(I.transpose() * I == id);
      CHECK(quaternion_relation_defect(b, p) == 0.0);
    }
  }

  TEST_CASE("standard_basis_images") {
    // I: e1 -> e2, J: e1 -> e3, K: e1 -> e4; J e2 = -e4, K e2 = e3 (0-based below)
    const auto b = QuaternionicBasis::standard(1);
    const Vec p = Vec::Zero(4);
    CHECK(b.apply(Structure::I, p, Vec::Unit(4, 0)) == Vec::Unit(4, 1));
    CHECK(b.apply(Structure::J, p, Vec::Unit(4, 0)) == Vec::Unit(4, 2));
    CHECK(b.apply(Structure::K, p, Vec::Unit(4, 0)) == Vec::Unit(4, 3));
    CHECK(b.apply(Structure::J, p, Vec::Unit(4, 1)) == -Vec::Unit(4, 3));
    CHECK(b.apply(Structure::K, p, Vec::Unit(4, 1)) == Vec::Unit(4, 2));
    // second block is a copy
    const auto b2 = QuaternionicBasis::standard(2);
    CHECK(b2.apply(Structure::I, Vec::Zero(8), Vec::Unit(8, 4)) == Vec::Unit(8, 5));
  }

  TEST_CASE("rotated_basis_relations_at_random_points") {
    const auto f = expr::parse("0.7 + 0.5*sin(y1*y3 - y6)", expr::numbered_params("y", 8));
    const auto b = QuaternionicBasis::rotated(QuaternionicBasis::standard(2), AngleField::from_expression(f));
    CHECK_FALSE(b.is_parallel());
    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
      const Vec p = rng.normal_vector(8);
      CHECK(quaternion_relation_defect(b, p) < 1e-12);
      // explicit rotation formula
      const double a = 0.7 + 0.5 * std::sin(p[0] * p[2] - p[5]);
      const Mat expected = std::cos(a) * b.base_matrix(Structure::I) - std::sin(a) * b.base_matrix(Structure::J);
      CHECK(max_abs(b.matrix(Structure::I, p) - expected) < 1e-15);
      CHECK(max_abs(b.matrix(Structure::K, p) - b.base_matrix(Structure::K)) == 0.0);
    }
  }

  TEST_CASE("rotation_angle_domain") {
    const auto f = expr::parse("y1", expr::numbered_params("y", 4));
    const auto b = QuaternionicBasis::rotated(QuaternionicBasis::standard(1), AngleField::from_expression(f));
    CHECK_THROWS_AS(b.matrix(Structure::I, Vec::Unit(4, 0) * 2.0), DomainError);
    CHECK_THROWS_AS(b.matrix(Structure::I, -Vec::Unit(4, 0)), DomainError);
    CHECK(b.degenerate_rotation_at(Vec::Zero(4)));
    CHECK(b.degenerate_rotation_at(Vec::Unit(4, 0) * (M_PI / 2)));
    CHECK_FALSE(b.degenerate_rotation_at(Vec::Unit(4, 0) * 0.5));
  }

  TEST_CASE("constant_rotation_is_parallel") {
    const auto b = QuaternionicBasis::rotated(QuaternionicBasis::standard(1), AngleField::constant_value(M_PI / 6));
    CHECK(b.is_rotated());
    CHECK(b.is_parallel());
    CHECK(*b.angle_at(Vec::Zero(4)) == doctest::Approx(M_PI / 6));
    CHECK_THROWS_AS(QuaternionicBasis::rotated(b, AngleField::constant_value(0.1)), ContractViolation);
  }

  TEST_CASE("invalid_dimensions") {
    CHECK_THROWS_AS(QuaternionicBasis::standard(0), InvalidDimension);
    const auto b = QuaternionicBasis::standard(1);
    CHECK_THROWS_AS(b.apply(Structure::I, Vec::Zero(4), Vec::Zero(8)), InvalidDimension);
  }
}
