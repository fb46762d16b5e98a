#pragma once

// Pipeline commands behind the `mbflow` executable: gate catalog, evolution
// runs, per-brain analysis and batch reports. Every artifact is a pure
// function of its inputs so reruns are byte-identical.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbflow/detection.hpp"
#include "mbflow/evolve.hpp"
#include "mbflow/groundtruth.hpp"
#include "mbflow/infoflow.hpp"
#include "mbflow/io.hpp"
#include "mbflow/tasks.hpp"

namespace mbflow {

namespace fs = std::filesystem;

struct ExperimentConfig {
  TaskKind task = TaskKind::MotionDetection;
  EvolveConfig evolve;
  std::vector<double> te_threshold_grid = default_thresholds();
  std::string output_dir = "runs/out";
  std::uint64_t seed = 1;

  /// Copies task and seed into the evolve section and validates.
  void normalize();

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

void to_json(json& j, const ExperimentConfig& c);
void from_json(const json& j, ExperimentConfig& c);

ExperimentConfig load_config(const fs::path& path);

/// Built-in desk-scale presets "md-desk" and "sl-desk" (20 replicates x
/// 2000 generations x population 100). Throws std::invalid_argument for
/// other names.
ExperimentConfig preset(const std::string& name);

/// Directory holding the shipped preset JSON files.
fs::path preset_directory();

/// Canonical gate names in catalog order, duplicates removed.
const std::vector<std::string>& gate_type_names();

using GateHistogram = std::map<std::string, int>;

GateHistogram gate_histogram(const Brain& brain, const std::vector<std::size_t>& gate_indices);
GateHistogram gate_histogram(const Brain& brain);

struct BrainReport {
  int replicate_id = -1;
  TaskKind task = TaskKind::MotionDetection;
  int score = 0;
  int perfect_score = 0;
  bool perfect = false;
  int gate_count = 0;
  GateHistogram gate_histogram;
  GateHistogram essential_gate_histogram;  // empty unless perfect
  std::optional<KnockoutReport> knockout;  // skipped for imperfect brains
  FlowBounds flow_bounds;                  // over essential gates
  ConfusionCounts confusion_at_zero;
  RocCurve roc;
  TEMatrix te;
  InfluenceMap influence;
};

void to_json(json& j, const BrainReport& r);
void from_json(const json& j, BrainReport& r);

BrainReport analyze_brain(const Brain& brain, const TaskSpec& task, const std::vector<double>& thresholds,
                          int replicate_id = -1);

/// Writes report.json, te_matrix.{csv,json}, influence_map.{csv,json},
/// knockout.json (perfect brains only) and roc.csv into `dir`.
void write_brain_report(const fs::path& dir, const BrainReport& report);

struct Table1Result {
  std::string csv;
  std::vector<std::string> mismatches;  // empty when every 2-d.p. value matches
};

/// Gate catalog with a self-check against the reference 2-decimal table.
Table1Result table1();

/// Writes the catalog CSV. Returns 0 on success, 2 on a self-check failure.
int cmd_table1(const fs::path& out_file);

/// Runs every replicate and writes config.json, summary.csv and one
/// replicate_NNN/ directory per run (genome.bin, genome.json, brain.json,
/// run.json, trajectory.csv). Throws std::runtime_error if the output
/// directory is unwritable.
std::vector<RunResult> cmd_evolve(const ExperimentConfig& config, int threads);

/// Analyzes one brain file into `out_dir`.
BrainReport cmd_analyze(const fs::path& brain_file, const TaskSpec& task,
                        const std::vector<double>& thresholds, const fs::path& out_dir);

/// Analyzes every replicate champion of an evolve output directory into
/// out_dir/replicate_NNN/.
std::vector<BrainReport> cmd_analyze_run(const fs::path& run_dir, const fs::path& out_dir);

struct MeanCI {
  double mean = 0.0;
  std::optional<double> se;  // absent for a single sample
  int n = 0;
};

MeanCI mean_ci(const std::vector<double>& values);

struct BatchSummary {
  TaskKind task = TaskKind::MotionDetection;
  int report_count = 0;
  int perfect_count = 0;
  std::map<std::string, MeanCI> metrics;
  RocCurve pooled_roc;
};

/// Reads every report.json under `in_dir`.
std::vector<BrainReport> load_reports(const fs::path& in_dir);

/// Aggregates perfect-score reports; the ROC sweep reuses the reports'
/// thresholds. Throws std::invalid_argument when there is no report, no
/// perfect report, or the reports mix tasks or threshold grids.
BatchSummary summarize(const std::vector<BrainReport>& reports);

/// Aggregates reports under `in_dir` into CSV/JSON files in `out_dir`.
BatchSummary cmd_report(const fs::path& in_dir, const fs::path& out_dir);

}  // namespace mbflow
