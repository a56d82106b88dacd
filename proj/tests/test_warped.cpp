#include "doctest.h"

#include "slantlab/catalog.hpp"
#include "slantlab/error.hpp"
#include "slantlab/warped.hpp"

using namespace slantlab;

namespace {

double expected_rhs(const FrameLevelInstance& inst) {
  const double s = std::sin(inst.theta), c = std::cos(inst.theta);
  return 4.0 * inst.n2 * (1.0 + c * c) / (s * s) * inst.grad_lnf.squaredNorm();
}

ChartUnderTest warped(const char* call) {
  auto cut = build_chart(catalog_chart(call));
  REQUIRE(cut.warped);
  return cut;
}

}  // namespace

TEST_SUITE("warped") {
  TEST_CASE("frame_level_worked_value") {
    // theta = pi/4, one fiber block, |grad ln f| = 1: 4 (2 + 1) = 12
    const auto r = frame_level_expansion(FrameLevelInstance::zero(M_PI / 4, 1, 1, Vec::Unit(4, 0)));
    CHECK(r.lhs == doctest::Approx(12.0).epsilon(1e-13));
    CHECK(r.rhs == doctest::Approx(12.0).epsilon(1e-13));
    CHECK(r.frame_defect < 1e-14);
  }

  TEST_CASE("frame_level_single_coefficient_gap") {
    for (double c : {0.5, -1.3, 2.0}) {
      auto inst = FrameLevelInstance::zero(0.7, 1, 2, Vec::Unit(4, 2) * 0.4);
      inst.which = Structure::K;
      inst.coeffs[1][1][3] = c;
      CHECK(frame_level_expansion(inst).gap == doctest::Approx(c * c).epsilon(1e-12));
      // off-diagonal entries enter twice through (i, j) and (j, i)
      inst.coeffs[0][2][1] = inst.coeffs[2][0][1] = c;
      CHECK(frame_level_expansion(inst).gap == doctest::Approx(3 * c * c).epsilon(1e-12));
    }
  }

  TEST_CASE("frame_level_without_warp_is_the_fiber_sum") {
    Rng rng(31);
    auto inst = FrameLevelInstance::random(rng, 2, 2, Structure::J);
    inst.grad_lnf = Vec::Zero(8);
    const auto r = frame_level_expansion(inst);
    CHECK(r.rhs == 0.0);
    CHECK(r.lhs == doctest::Approx(inst.coeff_square_sum()).epsilon(1e-12));
  }

  TEST_CASE("frame_level_random_instances") {
    Rng rng(32);
    for (int k = 0; k < 200; ++k) {
      const int n1 = 1 + static_cast<int>(rng.next() % 2), n2 = 1 + static_cast<int>(rng.next() % 3);
      const auto inst = FrameLevelInstance::random(rng, n1, n2, kStructures[k % 3]);
      const auto r = frame_level_expansion(inst);
      CHECK(r.frame_defect < 1e-12);
      CHECK(std::abs(r.rhs - expected_rhs(inst)) < 1e-9 * (1 + r.rhs));
      CHECK(std::abs(r.gap - inst.coeff_square_sum()) < 1e-9 * (1 + r.lhs));
      CHECK(r.gap >= -1e-12);
    }
  }

  TEST_CASE("frame_level_rejects_bad_instances") {
    CHECK_THROWS_AS(frame_level_expansion(FrameLevelInstance::zero(0.0, 1, 1, Vec::Zero(4))), DomainError);
    CHECK_THROWS_AS(frame_level_expansion(FrameLevelInstance::zero(M_PI / 2, 1, 1, Vec::Zero(4))), DomainError);
    CHECK_THROWS_AS(frame_level_expansion(FrameLevelInstance::zero(0.5, 1, 1, Vec::Zero(8))), InvalidDimension);
    auto inst = FrameLevelInstance::zero(0.5, 1, 1, Vec::Zero(4));
    inst.coeffs[0][1][0] = 1.0;
    CHECK_THROWS_AS(frame_level_expansion(inst), ContractViolation);
  }

  TEST_CASE("orthogonality_sums_vanish") {
    Rng rng(33);
    for (int n1 : {1, 2})
      for (int k = 0; k < 50; ++k) {
        const auto basis = QuaternionicBasis::standard(n1);
        const Vec v = rng.normal_vector(4 * n1);
        for (Structure s : kStructures) {
          const auto sums = orthogonality_sums(basis, s, v);
          CHECK(std::abs(sums[0]) < 1e-12);
          CHECK(std::abs(sums[1]) < 1e-12);
        }
      }
  }

  TEST_CASE("revolution_surface_identities") {
    const double c = 0.5;
    const auto cut = warped("warped_revolution(c=0.5)");
    const auto& wc = *cut.warped;
    for (const Vec& x : cut.grid) {
      const auto d = warp_metric_defect(wc, x);
      CHECK(d.off_diagonal < 1e-12);
      CHECK(d.fiber_block < 1e-12);
      CHECK(d.warp_positive == doctest::Approx(std::exp(c * x[0])));
      CHECK_NOTHROW(require_warped_form(wc, x));
      const auto res = warp_identity_residuals(wc, x);
      CHECK(res.connection < 1e-4);
      CHECK(res.sectional < 1e-3);
      CHECK(res.laplacian < 1e-3);
      CHECK(res.curvature_sum < 1e-3);
      // Gaussian curvature of (b, r cos t, r sin t): -r'' / (r (1 + r'^2)^2)
      const double r = std::exp(c * x[0]);
      const double gauss = -c * c / std::pow(1 + c * c * r * r, 2);
      const auto pg = second_fundamental_form(wc.chart, x);
      CHECK(sectional_curvature(pg, pg.jacobian.col(0), pg.jacobian.col(1)) == doctest::Approx(gauss).epsilon(1e-10));
    }
    CHECK_FALSE(is_trivial_warp(wc, cut.grid));
  }

  TEST_CASE("revolution_laplacian_oracle") {
    // Base metric g = 1 + c^2 f^2; Delta f = -(1/sqrt g) d_b (f' / sqrt g)
    const double c = 0.5;
    const auto cut = warped("warped_revolution(c=0.5)");
    for (const Vec& x : cut.grid) {
      const double f = std::exp(c * x[0]);
      const double g = 1 + c * c * f * f;
      const double dg = 2 * c * c * f * (c * f);
      const double fp = c * f, fpp = c * c * f;
      const double oracle = -(fpp / g - 0.5 * fp * dg / (g * g));
      CHECK(warp_laplacian_divergence(*cut.warped, x) == doctest::Approx(oracle).epsilon(1e-8));
      CHECK(warp_laplacian_frame(*cut.warped, x) == doctest::Approx(oracle).epsilon(1e-5));
    }
  }

  TEST_CASE("sphere_fiber_identities") {
    const auto cut = warped("warped_sphere_fiber");
    for (const Vec& x : cut.grid) {
      const auto res = warp_identity_residuals(*cut.warped, x);
      CHECK(res.connection < 1e-4);
      CHECK(res.sectional < 1e-3);
      CHECK(res.curvature_sum < 1e-3);
    }
  }

  TEST_CASE("trivial_warp_detection") {
    const auto cut = warped("surface_times_block");
    CHECK(is_trivial_warp(*cut.warped, cut.grid));
    for (std::size_t i = 0; i < cut.grid.size(); i += 11) {
      const auto res = warp_identity_residuals(*cut.warped, cut.grid[i]);
      CHECK(res.connection < 1e-4);
      CHECK(res.laplacian < 1e-6);
    }
  }

  TEST_CASE("reverse_candidate_is_not_in_warped_form") {
    const auto cut = warped("reverse_warp_candidate");
    CHECK(warp_metric_defect(*cut.warped, cut.grid[0]).off_diagonal > 1e-3);
    CHECK_THROWS_AS(require_warped_form(*cut.warped, cut.grid[0]), ContractViolation);
  }

  TEST_CASE("hypotheses_failures_are_explained") {
    const auto rev = warped("warped_revolution");
    const auto why = warped_hypotheses_failure(*rev.warped, rev.grid[0]);
    REQUIRE(why);
    CHECK_FALSE(why->empty());
    // the cone has TB = D1 shared, TF = D2, but the fiber is totally real
    const auto cone = warped("quaternionic_cone");
    const auto cone_why = warped_hypotheses_failure(*cone.warped, cone.grid[0]);
    REQUIRE(cone_why);
    CHECK(cone_why->find("proper") != std::string::npos);
  }

  TEST_CASE("lemma_identities_on_quaternionic_cone") {
    const auto cut = warped("quaternionic_cone");
    Rng rng(34);
    for (const Vec& x : cut.grid) {
      CHECK_NOTHROW(require_warped_form(*cut.warped, x));
      const auto sa = analyze(frame_at(cut.warped->chart, x), cut.warped->chart.basis());
      CHECK(sa.shared_d1);
      CHECK(sa[Structure::I].split.d1_dim() == 4);
      for (Structure s : kStructures) {
        CHECK(*sa[s].split.theta == doctest::Approx(M_PI / 2).epsilon(1e-9));
        const auto res = warped_lemma_residuals(*cut.warped, x, s, rng);
        CHECK(res.max() < 1e-4);
      }
    }
  }
}
