// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "support.hpp"

#include "slantlab/catalog.hpp"
#include "slantlab/checks.hpp"
#include "slantlab/config.hpp"
#include "slantlab/runner.hpp"
#include "slantlab/warped.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace slantlab;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double runtime_limit;  // seconds, 0 for none
  std::function<Outcome()> body;
};

Mat span_projector(int dim, std::initializer_list<int> axes) {
  Mat p = Mat::Zero(dim, dim);
  for (int a : axes) p(a, a) = 1.0;
  return p;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

/// Densifies a catalog grid until it has at least `min_points` points.
ChartUnderTest chart_with_points(ChartSpec spec, std::size_t min_points) {
  const std::size_t n = spec.params.size();
  std::vector<int> g(n, spec.grid.size() == 1 ? spec.grid[0] : 0);
  if (spec.grid.size() == n) g = spec.grid;
  auto count = [&] {
    std::size_t c = 1;
    for (int k : g) c *= static_cast<std::size_t>(k);
    return c;
  };
  for (std::size_t axis = 0; count() < min_points; axis = (axis + 1) % n) ++g[axis];
  spec.grid = g;
  return build_chart(spec);
}

/// Runs one point check over a whole chart; returns the worst residual and
/// counts failing or skipped points.
struct Sweep {
  double worst = 0.0;
  int failed = 0;
  int skipped = 0;
  int points = 0;
};

Sweep sweep(const char* check, double tolerance, const ChartUnderTest& cut, std::uint64_t seed) {
  const CheckInfo* info = find_check(check);
  Sweep s;
  for (int i = 0; i < static_cast<int>(cut.grid.size()); ++i) {
    const PointState ps = prepare_point(cut, i);
    const Entry e = run_point_check(*info, tolerance, cut, ps, seed);
    ++s.points;
    if (e.status == Status::Fail) ++s.failed;
    if (e.status == Status::Skipped || e.status == Status::NonConforming) ++s.skipped;
    if (e.residual) s.worst = std::max(s.worst, *e.residual);
  }
  return s;
}

Outcome structure_algebra() {
  Outcome o;
  for (int m : {1, 2, 4}) {
    const auto b = QuaternionicBasis::standard(m);
    o.ok = o.ok && quaternion_relation_defect(b, Vec::Zero(4 * m)) == 0.0;
  }
  const auto f = expr::parse("0.8 + 0.4*sin(y1 - y2*y5) + 0.2*cos(y8)", expr::numbered_params("y", 8));
  const auto rot = QuaternionicBasis::rotated(QuaternionicBasis::standard(2), AngleField::from_expression(f));
  Rng rng(101);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) worst = std::max(worst, quaternion_relation_defect(rot, rng.normal_vector(8)));
  o.ok = o.ok && worst < 1e-12;
  o.detail = "standard exact for m = 1, 2, 4; rotated worst " + sci(worst) + " over 100 points";
  return o;
}

Outcome semi_invariant_example() {
  Outcome o;
  const auto cut = build_chart(catalog_chart("example_7_5"));
  double worst = 0.0;
  for (const Vec& x : cut.grid) {
    const auto pg = frame_at(*cut.chart, x);
    const auto sa = analyze(pg, cut.chart->basis());
    auto amb = [&](const Mat& p) { return Mat(pg.tangent_frame * p * pg.tangent_frame.transpose()); };
    for (Structure s : kStructures) worst = std::max(worst, std::abs(*sa[s].split.theta - M_PI / 2));
    worst = std::max(worst, max_abs(amb(sa[Structure::I].split.d1_projector) - span_projector(8, {2, 3})));
    worst = std::max(worst, max_abs(amb(sa[Structure::J].split.d2_projector) - pg.tangent_projector));
    worst = std::max(worst, max_abs(amb(sa[Structure::K].split.d1_projector) - span_projector(8, {5, 6})));
  }
  o.ok = worst < 1e-10;
  o.detail = "angles and projectors worst " + sci(worst) + " over " + std::to_string(cut.grid.size()) + " points";
  return o;
}

Outcome rotated_example() {
  Outcome o;
  double worst = 0.0;
  bool shared = true;
  std::size_t points = 0;
  for (const char* call : {"example_7_6(angle=pi/6)", "example_7_6(angle=pi/3)", "example_7_6"}) {
    const auto cut = build_chart(catalog_chart(call));
    for (const Vec& x : cut.grid) {
      const auto pg = frame_at(*cut.chart, x);
      const auto sa = analyze(pg, cut.chart->basis());
      const double f = *cut.chart->basis().angle_at(pg.p);
      worst = std::max({worst, std::abs(*sa[Structure::I].split.theta - f),
                        std::abs(*sa[Structure::J].split.theta - (M_PI / 2 - f)),
                        std::abs(*sa[Structure::K].split.theta - M_PI / 2)});
      shared = shared && sa.shared_d1 && sa[Structure::I].split.d1_dim() == 4;
      ++points;
    }
  }
  o.ok = worst < 1e-8 && shared;
  o.detail = "three angle fields, " + std::to_string(points) + " points, worst " + sci(worst) +
             (shared ? ", D1 shared of dim 4" : ", D1 not shared");
  return o;
}

Outcome tensor_identities() {
  Outcome o;
  double worst = 0.0;
  int failed = 0;
  std::size_t charts = 0;
  for (const auto& name : catalog_names()) {
    const auto cut = chart_with_points(catalog_chart(name), 27);
    const auto s = sweep("tensor_identities", 1e-8, cut, 5);
    worst = std::max(worst, s.worst);
    failed += s.failed + s.skipped;
    ++charts;
  }
  o.ok = failed == 0 && worst < 1e-8;
  o.detail = std::to_string(charts) + " charts, worst " + sci(worst) + ", " + std::to_string(failed) + " bad points";
  return o;
}

Outcome phi_omega_derivatives() {
  Outcome o;
  double worst = 0.0;
  int failed = 0, curved = 0;
  for (const char* name : {"holomorphic_curve", "curved_surface", "rotating_quaternionic_line"}) {
    const auto cut = build_chart(catalog_chart(name));
    if (sff_norm_squared(second_fundamental_form(*cut.chart, cut.grid[0])) > 1e-6) ++curved;
    const auto s = sweep("phi_omega_derivatives", 1e-5, cut, 6);
    worst = std::max(worst, s.worst);
    failed += s.failed + s.skipped;
  }
  o.ok = failed == 0 && curved >= 2 && worst < 1e-5;
  o.detail = std::to_string(curved) + " curved charts, worst " + sci(worst);
  return o;
}

Outcome kahler_closed() {
  Outcome o;
  double worst = 0.0;
  int failed = 0;
  std::string used;
  for (const auto& name : catalog_names()) {
    const auto cut = build_chart(catalog_chart(name));
    bool qualifies = cut.chart->basis().is_parallel();
    for (std::size_t i = 0; qualifies && i < cut.grid.size(); ++i) {
      const auto sa = analyze(frame_at(*cut.chart, cut.grid[i]), cut.chart->basis());
      qualifies = sa.almost_h_slant() && sa.proper;
    }
    if (!qualifies) continue;
    const auto s = sweep("kahler_form_closed", 1e-4, cut, 7);
    worst = std::max(worst, s.worst);
    failed += s.failed + s.skipped;
    used += (used.empty() ? "" : ", ") + name;
  }
  o.ok = failed == 0 && !used.empty() && worst < 1e-4;
  o.detail = "charts " + used + "; worst " + sci(worst);
  return o;
}

Outcome frame_level() {
  Outcome o;
  const auto w = frame_level_expansion(FrameLevelInstance::zero(M_PI / 4, 1, 1, Vec::Unit(4, 0)));
  const double worked = std::abs(w.lhs - 12.0);
  Rng rng(102);
  double worst = 0.0, min_gap = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const int n1 = 1 + static_cast<int>(rng.next() % 2), n2 = 1 + static_cast<int>(rng.next() % 3);
    const auto inst = FrameLevelInstance::random(rng, n1, n2, kStructures[i % 3]);
    const auto r = frame_level_expansion(inst);
    worst = std::max(worst, std::abs(r.gap - inst.coeff_square_sum()));
    min_gap = std::min(min_gap, r.gap);
  }
  o.ok = worked <= 1e-12 && worst < 1e-10 && min_gap >= 0.0;
  o.detail = "worked value off by " + sci(worked) + "; 1000 instances, worst " + sci(worst) + ", min gap " +
             sci(min_gap);
  return o;
}

Outcome orthogonality() {
  Outcome o;
  Rng rng(103);
  double worst = 0.0;
  for (int n1 : {1, 2}) {
    const auto basis = QuaternionicBasis::standard(n1);
    for (int k = 0; k < 1000; ++k) {
      const Vec v = rng.normal_vector(4 * n1);
      for (Structure s : kStructures) {
        const auto sums = orthogonality_sums(basis, s, v);
        worst = std::max({worst, std::abs(sums[0]), std::abs(sums[1])});
      }
    }
  }
  o.ok = worst < 1e-12;
  o.detail = "1000 vectors for n1 = 1, 2; worst " + sci(worst);
  return o;
}

Outcome conformal() {
  Outcome o;
  double worst = 0.0;
  int bad = 0;
  for (const char* name : {"curved_surface", "holomorphic_curve"}) {
    const auto cut = build_chart(catalog_chart(name));
    for (const Vec& x : cut.grid) {
      const auto pg = frame_at(*cut.chart, x);
      const auto sa = analyze(pg, cut.chart->basis());
      for (double lambda : {0.25, std::exp(1.0), std::exp(0.3 * x.sum())}) {
        const auto th = slant_angles_with_metric(pg, cut.chart->basis(), lambda);
        for (Structure s : kStructures) {
          if (!th[index_of(s)]) {
            ++bad;
            continue;
          }
          worst = std::max(worst, std::abs(*th[index_of(s)] - *sa[s].split.theta));
        }
      }
    }
  }
  o.ok = bad == 0 && worst < 1e-10;
  o.detail = "two charts, three scale fields, worst " + sci(worst);
  return o;
}

Outcome jets() {
  Outcome o;
  Rng rng(104);
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + static_cast<int>(rng.next() % 3);
    const auto e = expr::parse(testing::random_expression(rng, n, 3), expr::numbered_params("x", n));
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1, 1);
    const auto m = testing::compare_with_differences(e, x);
    worst = std::max({worst, m.gradient, m.hessian});
  }
  o.ok = worst < 1e-5;
  o.detail = "500 expression/point pairs, worst relative " + sci(worst);
  return o;
}

Outcome determinism() {
  Outcome o;
  const auto cfg = load_config(std::string(SLANTLAB_CONFIG_DIR) + "/catalog.cfg");
  const std::string a = to_json(run(cfg));
  const std::string b = to_json(run(cfg));
  o.ok = a == b;
  o.detail = "full catalog, " + std::to_string(a.size()) + " bytes" + (o.ok ? ", identical" : ", differ");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "structure algebra", 1, structure_algebra},
      {2, "semi-invariant example in R^8", 1, semi_invariant_example},
      {3, "rotated-basis example, three angle fields", 5, rotated_example},
      {4, "tensor identities on every catalog chart", 10, tensor_identities},
      {5, "phi and omega derivative identities", 30, phi_omega_derivatives},
      {6, "fundamental 2-forms closed", 30, kahler_closed},
      {7, "frame-level inequality oracle", 1, frame_level},
      {8, "orthogonality sums", 1, orthogonality},
      {9, "conformal invariance of slant angles", 0, conformal},
      {10, "expression jets vs differences", 5, jets},
      {11, "deterministic reports", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = out.ok;
    if (c.runtime_limit > 0 && secs > c.runtime_limit) {
      ok = false;
      out.detail += "; over the " + std::to_string(static_cast<int>(c.runtime_limit)) + " s limit";
    }
    if (!ok) ++failures;
    std::printf("%s %2d %s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
