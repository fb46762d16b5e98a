#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mbflow/app.hpp"

namespace {

using namespace mbflow;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSelfCheck = 2;

struct Options {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> task;
  int threads = 0;
  std::optional<std::string> out;
  std::string brain;
  std::string run;
  std::string in;
};

ExperimentConfig resolve_config(const Options& o) {
  ExperimentConfig cfg;
  if (!o.config.empty() && !o.preset.empty()) throw std::invalid_argument("--config and --preset are exclusive");
  if (!o.config.empty()) cfg = load_config(o.config);
  if (!o.preset.empty()) cfg = preset(o.preset);
  if (o.seed) cfg.seed = *o.seed;
  if (o.task) cfg.task = parse_task(*o.task);
  if (o.out) cfg.output_dir = *o.out;
  cfg.normalize();
  return cfg;
}

int run_table1(const Options& o) {
  const fs::path out = o.out ? fs::path(*o.out) : fs::path(".");
  const fs::path file = out / "table1.csv";
  const int rc = cmd_table1(file);
  if (rc == 0) std::printf("wrote %s (16 gates, self-check ok)\n", file.string().c_str());
  return rc == 0 ? kExitOk : kExitSelfCheck;
}

int run_evolve(const Options& o) {
  const ExperimentConfig cfg = resolve_config(o);
  const auto results = cmd_evolve(cfg, o.threads);
  const int perfect_score = make_task(cfg.task).perfect_score();
  int perfect = 0;
  for (const auto& r : results) perfect += r.champion_score == perfect_score;
  std::printf("%s: %d/%zu replicates perfect (score %d), artifacts in %s\n", task_name(cfg.task).c_str(),
              perfect, results.size(), perfect_score, cfg.output_dir.c_str());
  return kExitOk;
}

int run_analyze(const Options& o) {
  if (!o.out) throw std::invalid_argument("analyze requires --out");
  if (!o.run.empty()) {
    if (!o.brain.empty()) throw std::invalid_argument("--run and --brain are exclusive");
    const auto reports = cmd_analyze_run(o.run, *o.out);
    int perfect = 0;
    for (const auto& r : reports) perfect += r.perfect;
    std::printf("analyzed %zu brains (%d perfect) into %s\n", reports.size(), perfect, o.out->c_str());
    return kExitOk;
  }
  if (o.brain.empty()) throw std::invalid_argument("analyze requires --brain FILE or --run DIR");
  Options cfg_opts = o;
  cfg_opts.out.reset();
  const ExperimentConfig cfg = resolve_config(cfg_opts);
  const BrainReport r = cmd_analyze(o.brain, make_task(cfg.task), cfg.te_threshold_grid, *o.out);
  std::printf("score %d/%d%s, %d gates, hits %d misses %d false alarms %d\n", r.score, r.perfect_score,
              r.perfect ? " (perfect)" : "", r.gate_count, r.confusion_at_zero.hits, r.confusion_at_zero.misses,
              r.confusion_at_zero.false_alarms);
  return kExitOk;
}

int run_report(const Options& o) {
  if (o.in.empty() || !o.out) throw std::invalid_argument("report requires --in DIR and --out DIR");
  const BatchSummary s = cmd_report(o.in, *o.out);
  std::printf("%s: aggregated %d perfect of %d reports into %s\n", task_name(s.task).c_str(), s.perfect_count,
              s.report_count, o.out->c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolve Markov Brains and score transfer-entropy network inference"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Experiment config JSON")->check(CLI::ExistingFile);
    sub->add_option("--preset", o.preset, "Built-in preset: md-desk or sl-desk");
    sub->add_option("--seed", o.seed, "Master seed override");
    sub->add_option("--task", o.task, "Task override: md or sl")->check(CLI::IsMember({"md", "sl"}));
  };

  auto* table1 = app.add_subcommand("table1", "Write the analytic gate catalog and self-check it");
  table1->add_option("--out", o.out, "Output directory (default: current)");

  auto* evolve = app.add_subcommand("evolve", "Run replicate populations and save champions");
  add_common(evolve);
  evolve->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  evolve->add_option("--out", o.out, "Output directory override");

  auto* analyze = app.add_subcommand("analyze", "Analyze a brain file or every champion of a run");
  add_common(analyze);
  analyze->add_option("--brain", o.brain, "Brain JSON file")->check(CLI::ExistingFile);
  analyze->add_option("--run", o.run, "Evolve output directory")->check(CLI::ExistingDirectory);
  analyze->add_option("--out", o.out, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Aggregate brain reports");
  report->add_option("--in", o.in, "Directory searched for report.json files")->required()->check(
      CLI::ExistingDirectory);
  report->add_option("--out", o.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*table1) return run_table1(o);
    if (*evolve) return run_evolve(o);
    if (*analyze) return run_analyze(o);
    if (*report) return run_report(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mbflow: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
