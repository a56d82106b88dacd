// slantlab command line: run configs, list the catalog, check single charts.

#include "slantlab/catalog.hpp"
#include "slantlab/config.hpp"
#include "slantlab/error.hpp"
#include "slantlab/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct OutputOptions {
  bool strict = false;
  std::optional<std::uint64_t> seed;
  std::string format;
  std::string out;
  unsigned threads = 0;
};

void add_output_options(CLI::App* cmd, OutputOptions& o) {
  cmd->add_flag("--strict", o.strict, "also fail on skipped and non-conforming entries");
  cmd->add_option("--seed", o.seed, "override the seed");
  cmd->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--out", o.out, "report path (default: stdout)");
  cmd->add_option("--threads", o.threads, "worker threads (0: hardware concurrency)");
}

int execute(slantlab::RunConfig cfg, const OutputOptions& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (!o.format.empty()) cfg.format = o.format;
  if (!o.out.empty()) cfg.out = o.out;
  const slantlab::Report report = slantlab::run(cfg, o.threads);
  const std::string text = cfg.format == "text" ? slantlab::to_text(report) : slantlab::to_json(report);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw slantlab::ConfigError("cannot write report to '" + cfg.out + "'");
    f << text;
  }
  if (report.any_fail()) return kExitFail;
  if (o.strict && report.any_skipped_or_nonconforming()) return kExitFail;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"slantlab: numerical checks for slant submanifolds of flat hyperkaehler space"};
  app.require_subcommand(1);

  OutputOptions run_opts;
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run the checks of a config file");
  run_cmd->add_option("config", config_path, "config file")->required();
  add_output_options(run_cmd, run_opts);

  auto* catalog_cmd = app.add_subcommand("catalog", "list the built-in charts");

  auto* checks_cmd = app.add_subcommand("checks", "list the available checks");

  OutputOptions check_opts;
  std::string chart_call;
  std::string check_list = "all";
  auto* check_cmd = app.add_subcommand("check", "run checks on one built-in chart");
  check_cmd->add_option("chart", chart_call, "catalog chart, e.g. slant_plane(alpha=pi/4)")->required();
  check_cmd->add_option("--checks", check_list, "comma-separated check names (default: all)");
  add_output_options(check_cmd, check_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*catalog_cmd) {
      for (const auto& c : slantlab::catalog()) {
        std::cout << c.name;
        if (!c.defaults.empty()) {
          std::cout << "(";
          for (std::size_t i = 0; i < c.defaults.size(); ++i)
            std::cout << (i ? ", " : "") << c.defaults[i].first << "=" << c.defaults[i].second;
          std::cout << ")";
        }
        std::cout << "\n    " << c.summary << "\n";
      }
      return 0;
    }
    if (*checks_cmd) {
      for (const auto& c : slantlab::check_registry())
        std::cout << c.name << "  (tol " << c.tolerance << ")\n    " << c.summary << "\n";
      return 0;
    }
    if (*run_cmd) return execute(slantlab::load_config(config_path), run_opts);
    if (*check_cmd) {
      // Same path as a config file, so the hash covers the request.
      const std::string text = "[run]\nchecks = " + check_list + "\n[chart.main]\ncatalog = \"" + chart_call + "\"\n";
      slantlab::RunConfig cfg = slantlab::parse_config(text);
      cfg.charts[0].name = chart_call;
      return execute(std::move(cfg), check_opts);
    }
  } catch (const slantlab::Error& e) {
    std::cerr << "slantlab: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
