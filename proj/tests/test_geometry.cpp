#include "doctest.h"

#include "slantlab/error.hpp"
#include "slantlab/geometry.hpp"

using namespace slantlab;

namespace {

std::shared_ptr<const QuaternionicBasis> standard(int m) {
  return std::make_shared<QuaternionicBasis>(QuaternionicBasis::standard(m));
}

ImmersionChart chart(std::vector<std::string> params, std::vector<std::string> comps, double lo = -1, double hi = 1) {
  const int n = static_cast<int>(params.size());
  ParameterBox box{Vec::Constant(n, lo), Vec::Constant(n, hi)};
  const int m = static_cast<int>(comps.size()) / 4;
  return ImmersionChart::from_sources("t", std::move(params), comps, box, standard(m));
}

Vec v2(double a, double b) {
  Vec x(2);
  x << a, b;
  return x;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("grid_enumerates_first_axis_slowest") {
    ParameterBox box{v2(0, 0), v2(1, 2)};
    const auto g = grid_points(box, {2, 3});
    REQUIRE(g.size() == 6);
    CHECK(g[0] == v2(0, 0));
    CHECK(g[1] == v2(0, 1));
    CHECK(g[2] == v2(0, 2));
    CHECK(g[3] == v2(1, 0));
    CHECK_THROWS_AS(grid_points(box, {1, 3}), ContractViolation);
    CHECK_THROWS_AS(grid_points(box, {2}), InvalidDimension);
  }

  TEST_CASE("chart_validation") {
    CHECK_THROWS_AS(chart({"x1"}, {"x1", "0", "0"}), InvalidDimension);
    CHECK_THROWS_AS(chart({"x1", "x2"}, {"x1", "0", "0", "x3"}), UnknownIdentifier);
  }

  TEST_CASE("frame_spans_jacobian_columns") {
    const auto c = chart({"x1", "x2"}, {"x1", "0.6*x2 + 0.2*x1^2", "0.5*x2 + 0.1*x2^2", "0.6*x2 - 0.15*x1*x2"});
    const Vec x = v2(0.3, -0.2);
    const auto pg = frame_at(c, x);
    const Mat& jac = pg.jacobian;
    const Mat oracle = jac * (jac.transpose() * jac).inverse() * jac.transpose();
    CHECK(max_abs(pg.tangent_projector - oracle) < 1e-13);
    CHECK(max_abs(pg.tangent_frame.transpose() * pg.tangent_frame - Mat::Identity(2, 2)) < 1e-14);
    CHECK(max_abs(pg.normal_frame.transpose() * pg.tangent_frame) < 1e-14);
    CHECK(max_abs(pg.tangent_frame * pg.coordinate_to_frame - jac) < 1e-14);
    // upper triangular with positive diagonal: first frame vector is the first column direction
    CHECK(pg.coordinate_to_frame(1, 0) == 0.0);
    CHECK(max_abs(pg.tangent_frame.col(0) - jac.col(0).normalized()) < 1e-15);
    CHECK(max_abs(pg.coordinate_coeffs(jac * v2(0.7, -1.1)) - v2(0.7, -1.1)) < 1e-12);
  }

  TEST_CASE("circle_curvature") {
    for (double r : {1.0, 0.5, 3.0}) {
      const std::string rs = std::to_string(r);
      const auto c = chart({"x1"}, {rs + "*cos(x1)", rs + "*sin(x1)", "0", "0"}, 0, 3);
      Vec x(1);
      x << 1.2;
      const auto pg = second_fundamental_form(c, x);
      // H points to the centre with length 1/r
      const Vec expected = -pg.p / (r * r);
      CHECK(max_abs(pg.mean_curvature - expected) < 1e-12);
      CHECK(sff_norm_squared(pg) == doctest::Approx(1 / (r * r)).epsilon(1e-12));
    }
  }

  TEST_CASE("unit_sphere_is_umbilic") {
    const auto c = chart({"x1", "x2"}, {"cos(x1)*cos(x2)", "cos(x1)*sin(x2)", "sin(x1)", "0"});
    const auto pg = second_fundamental_form(c, v2(0.4, 0.9));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) CHECK(max_abs(pg.h[a][b] - (a == b ? -1.0 : 0.0) * pg.p) < 1e-12);
    CHECK(max_abs(pg.mean_curvature + pg.p) < 1e-12);
  }

  TEST_CASE("linear_chart_is_totally_geodesic") {
    const auto c = chart({"x1", "x2"}, {"x1 + x2", "2*x2", "0", "x1 - 3*x2"});
    const auto pg = second_fundamental_form(c, v2(0.1, 0.2));
    CHECK(sff_norm_squared(pg) == 0.0);
  }

  TEST_CASE("second_fundamental_form_is_frame_independent") {
    const auto c = chart({"x1", "x2"}, {"x1", "x2", "x1^2 + x2^2", "x1*x2"});
    const auto pg = second_fundamental_form(c, v2(0.3, 0.5));
    Rng rng(5);
    for (int k = 0; k < 5; ++k) {
      const Vec X = pg.tangent_frame * rng.normal_vector(2);
      const Vec Y = pg.tangent_frame * rng.normal_vector(2);
      // h(X, Y) = normal part of the second derivative along coordinate directions
      const Vec u = pg.coordinate_coeffs(X), w = pg.coordinate_coeffs(Y);
      Vec direct = Vec::Zero(4);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) direct += u[i] * w[j] * pg.coordinate_second_derivative(i, j);
      CHECK(max_abs(pg.sff(X, Y) - pg.normal_projector * direct) < 1e-12);
      CHECK(max_abs(pg.sff(X, Y) - pg.sff(Y, X)) < 1e-14);
    }
  }

  TEST_CASE("shape_operator_duality_and_contract") {
    const auto c = chart({"x1", "x2"}, {"x1", "x2", "x1^2 - x2^2", "x1*x2"});
    const auto pg = second_fundamental_form(c, v2(0.2, -0.4));
    const Vec Z = pg.normal_frame * Vec::Ones(2);
    const Mat a = shape_operator(pg, Z);
    CHECK(max_abs(a - a.transpose()) < 1e-14);
    CHECK(a(0, 1) == doctest::Approx(pg.h[0][1].dot(Z)));
    CHECK_THROWS_AS(shape_operator(pg, pg.tangent_frame.col(0)), ContractViolation);
  }

  TEST_CASE("weingarten_on_circle") {
    // Z = position is normal; d_X Z = X, A_Z X = -X, D_X Z = 0
    const auto c = chart({"x1"}, {"cos(x1)", "sin(x1)", "0", "0"}, 0, 3);
    Vec x(1);
    x << 0.8;
    const auto pg = second_fundamental_form(c, x);
    const AmbientField Z = [&c](const Vec& y) { return c.point(y); };
    Vec u(1);
    u << 1.0;
    const Vec X = pg.jacobian * u;
    CHECK(max_abs(pg.shape_apply(Z(x), X) + X) < 1e-12);
    CHECK(normal_connection(c, x, u, Z).norm() < 1e-9);
    CHECK(max_abs(directional_derivative(Z, x, u) - X) < 1e-9);
    const AmbientField not_normal = [&c](const Vec& y) -> Vec { return c.jacobian(y).col(0); };
    CHECK_THROWS_AS(normal_connection(c, x, u, not_normal), ContractViolation);
  }

  TEST_CASE("degenerate_immersion_is_rejected") {
    const auto c = chart({"x1", "x2"}, {"x1^2", "x2", "0", "0"});
    CHECK_THROWS_AS(frame_at(c, v2(0, 0.5)), DegenerateImmersion);
    CHECK_NOTHROW(frame_at(c, v2(0.5, 0.5)));
  }

  TEST_CASE("gram_schmidt_matches_qr_up_to_signs") {
    Rng rng(9);
    Mat m(6, 3);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rng.normal();
    const Mat q = gram_schmidt(m);
    Eigen::HouseholderQR<Mat> qr(m);
    const Mat qq = qr.householderQ() * Mat::Identity(6, 3);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(std::abs(q.col(j).dot(qq.col(j))) - 1) < 1e-13);
  }
}
