#include "slantlab/runner.hpp"

#include "slantlab/error.hpp"

#include <atomic>
#include <functional>
#include <thread>

namespace slantlab {

namespace {

bool applies(const CheckInfo& info, const ChartUnderTest& cut) {
  switch (info.target) {
    case CheckTarget::AnyChart: return true;
    case CheckTarget::WarpedChart: return cut.warped && !cut.reverse_candidate;
    case CheckTarget::ReverseCandidate: return cut.reverse_candidate && cut.warped;
    case CheckTarget::None: return false;
  }
  return false;
}

using Task = std::function<std::vector<Entry>()>;

void run_tasks(const std::vector<Task>& tasks, std::vector<std::vector<Entry>>& results, unsigned threads) {
  results.assign(tasks.size(), {});
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) results[i] = tasks[i]();
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

Report run(const RunConfig& cfg, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto checks = cfg.selected_checks();

  std::vector<ChartUnderTest> charts;
  for (const auto& spec : cfg.charts) charts.push_back(build_chart(spec));

  std::vector<Task> tasks;
  for (const auto& cut : charts) {
    std::vector<const CheckInfo*> point_checks;
    for (const CheckInfo* info : checks) {
      if (!applies(*info, cut)) continue;
      if (info->scope == CheckScope::Point) {
        point_checks.push_back(info);
      } else if (info->scope == CheckScope::Chart) {
        tasks.push_back([&cfg, &cut, info] {
          Entry e = run_chart_check(*info, cfg.tolerance_for(*info), cut, cfg.seed);
          e.chart = cut.name;
          return std::vector<Entry>{e};
        });
      }
    }
    if (point_checks.empty()) continue;
    for (std::size_t i = 0; i < cut.grid.size(); ++i)
      tasks.push_back([&cfg, &cut, point_checks, i] {
        const PointState ps = prepare_point(cut, static_cast<int>(i));
        std::vector<Entry> out;
        for (const CheckInfo* info : point_checks) {
          Entry e = run_point_check(*info, cfg.tolerance_for(*info), cut, ps, cfg.seed);
          e.chart = cut.name;
          annotate(e, ps);
          out.push_back(std::move(e));
        }
        return out;
      });
  }
  for (const CheckInfo* info : checks) {
    if (info->scope == CheckScope::Global) {
      tasks.push_back([&cfg, info] {
        auto entries = run_global_check(*info, cfg.tolerance_for(*info), cfg.global, cfg.seed);
        for (auto& e : entries) e.chart = kFrameLevelChart;
        return entries;
      });
    } else if (info->target == CheckTarget::ReverseCandidate) {
      bool any = false;
      for (const auto& cut : charts) any = any || applies(*info, cut);
      if (!any)
        tasks.push_back([info] {
          Entry e = Entry::skipped(info->name, kChartLevel, "no candidates");
          e.chart = kNoCandidatesChart;
          return std::vector<Entry>{e};
        });
    }
  }

  std::vector<std::vector<Entry>> results;
  run_tasks(tasks, results, threads);

  Report report;
  report.config_hash = sha256_hex(cfg.source);
  report.seed = cfg.seed;
  for (auto& r : results)
    for (auto& e : r) report.entries.push_back(std::move(e));
  report.normalize();
  return report;
}

}  // namespace slantlab
