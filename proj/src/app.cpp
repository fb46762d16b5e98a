#include "mbflow/app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace mbflow {

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::normalize() {
  evolve.task = task;
  evolve.seed = seed;
  evolve.validate();
  if (te_threshold_grid.empty()) throw std::invalid_argument("te_threshold_grid must not be empty");
  for (std::size_t i = 0; i < te_threshold_grid.size(); ++i) {
    if (!(te_threshold_grid[i] >= 0.0 && te_threshold_grid[i] <= 1.0) ||
        (i > 0 && te_threshold_grid[i] < te_threshold_grid[i - 1]))
      throw std::invalid_argument("te_threshold_grid must ascend within [0,1]");
  }
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"task", task_name(c.task)},
           {"seed", c.seed},
           {"output_dir", c.output_dir},
           {"te_threshold_grid", c.te_threshold_grid},
           {"evolve",
            {{"population_size", c.evolve.population_size},
             {"generations", c.evolve.generations},
             {"replicates", c.evolve.replicates},
             {"tournament_size", c.evolve.tournament_size},
             {"elitism", c.evolve.elitism},
             {"initial_genome_length", c.evolve.initial_genome_length},
             {"mutation", c.evolve.mutation}}}};
}

void from_json(const json& j, ExperimentConfig& c) {
  ExperimentConfig d;
  c.task = parse_task(j.value("task", task_name(d.task)));
  c.seed = j.value("seed", d.seed);
  c.output_dir = j.value("output_dir", d.output_dir);
  c.te_threshold_grid = j.value("te_threshold_grid", d.te_threshold_grid);
  c.evolve = d.evolve;
  if (j.contains("evolve")) {
    const json& e = j.at("evolve");
    c.evolve.population_size = e.value("population_size", d.evolve.population_size);
    c.evolve.generations = e.value("generations", d.evolve.generations);
    c.evolve.replicates = e.value("replicates", d.evolve.replicates);
    c.evolve.tournament_size = e.value("tournament_size", d.evolve.tournament_size);
    c.evolve.elitism = e.value("elitism", d.evolve.elitism);
    c.evolve.initial_genome_length = e.value("initial_genome_length", d.evolve.initial_genome_length);
    if (e.contains("mutation")) c.evolve.mutation = e.at("mutation").get<MutationRates>();
  }
  c.normalize();
}

ExperimentConfig load_config(const fs::path& path) {
  try {
    return read_json(path).get<ExperimentConfig>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "md-desk") {
    c.task = TaskKind::MotionDetection;
    c.seed = 20190611;
  } else if (name == "sl-desk") {
    c.task = TaskKind::SoundLocalization;
    c.seed = 20190612;
    // SL steps need two coordinated gates; faster gene turnover finds them sooner.
    c.evolve.mutation.point_rate = 0.02;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "' (expected md-desk or sl-desk)");
  }
  c.output_dir = "runs/" + name;
  c.evolve.population_size = 100;
  c.evolve.generations = 2000;
  c.evolve.replicates = 20;
  c.normalize();
  return c;
}

fs::path preset_directory() {
#ifdef MBFLOW_CONFIG_DIR
  return MBFLOW_CONFIG_DIR;
#else
  return "configs";
#endif
}

// ---------------------------------------------------------------------------
// Gate histograms

const std::vector<std::string>& gate_type_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (TruthTable t : catalog_order()) {
      std::string n = gate_name(t);
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    return out;
  }();
  return names;
}

GateHistogram gate_histogram(const Brain& brain, const std::vector<std::size_t>& gate_indices) {
  GateHistogram h;
  for (const auto& name : gate_type_names()) h[name] = 0;
  for (std::size_t i : gate_indices) ++h[gate_name(brain.gates.at(i).truth)];
  return h;
}

GateHistogram gate_histogram(const Brain& brain) {
  std::vector<std::size_t> all(brain.gates.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return gate_histogram(brain, all);
}

// ---------------------------------------------------------------------------
// Per-brain analysis

void to_json(json& j, const BrainReport& r) {
  j = json{{"replicate_id", r.replicate_id},
           {"task", task_name(r.task)},
           {"score", r.score},
           {"perfect_score", r.perfect_score},
           {"perfect", r.perfect},
           {"gate_count", r.gate_count},
           {"gate_histogram", r.gate_histogram},
           {"essential_gate_histogram", r.essential_gate_histogram},
           {"knockout", r.knockout ? json(*r.knockout) : json(nullptr)},
           {"flow_bounds", r.flow_bounds},
           {"confusion_at_zero", r.confusion_at_zero},
           {"roc", r.roc},
           {"te_matrix", r.te},
           {"influence_map", r.influence}};
}

void from_json(const json& j, BrainReport& r) {
  r.replicate_id = j.at("replicate_id").get<int>();
  r.task = parse_task(j.at("task").get<std::string>());
  r.score = j.at("score").get<int>();
  r.perfect_score = j.at("perfect_score").get<int>();
  r.perfect = j.at("perfect").get<bool>();
  r.gate_count = j.at("gate_count").get<int>();
  r.gate_histogram = j.at("gate_histogram").get<GateHistogram>();
  r.essential_gate_histogram = j.at("essential_gate_histogram").get<GateHistogram>();
  r.knockout.reset();
  if (!j.at("knockout").is_null()) r.knockout = j.at("knockout").get<KnockoutReport>();
  r.flow_bounds = j.at("flow_bounds").get<FlowBounds>();
  r.confusion_at_zero = j.at("confusion_at_zero").get<ConfusionCounts>();
  r.roc = j.at("roc").get<RocCurve>();
  r.te = j.at("te_matrix").get<TEMatrix>();
  r.influence = j.at("influence_map").get<InfluenceMap>();
}

BrainReport analyze_brain(const Brain& brain, const TaskSpec& task, const std::vector<double>& thresholds,
                          int replicate_id) {
  BrainReport r;
  r.replicate_id = replicate_id;
  r.task = task.kind;
  r.score = score(brain, task);
  r.perfect_score = task.perfect_score();
  r.perfect = r.score == r.perfect_score;
  r.gate_count = static_cast<int>(brain.gates.size());
  r.gate_histogram = gate_histogram(brain);
  if (r.perfect) {
    r.knockout = knockout_assay(brain, task);
    const auto essential = r.knockout->essential_gates();
    r.essential_gate_histogram = gate_histogram(brain, essential);
    r.flow_bounds = brain_flow_bounds(brain, essential);
  }
  r.te = te_matrix(record(brain, task));
  r.influence = influence_map(brain);
  r.confusion_at_zero = confusion(r.te, r.influence, 0.0, brain.sensors);
  r.roc = roc_curve(r.te, r.influence, thresholds, brain.sensors);
  return r;
}

void write_brain_report(const fs::path& dir, const BrainReport& report) {
  fs::create_directories(dir);
  write_json(dir / "report.json", report);
  write_text(dir / "te_matrix.csv", te_matrix_csv(report.te));
  write_json(dir / "te_matrix.json", report.te);
  write_text(dir / "influence_map.csv", influence_map_csv(report.influence));
  write_json(dir / "influence_map.json", report.influence);
  write_text(dir / "roc.csv", roc_csv(report.roc));
  if (report.knockout) write_json(dir / "knockout.json", *report.knockout);
}

// ---------------------------------------------------------------------------
// Gate catalog

namespace {

// Two-decimal reference values per catalog row:
// h_out, te_x, te_y, te_error, fb_te_y, fb_processed, fb_error.
constexpr double kReferenceTable[16][7] = {
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},          // ZERO
    {0.81, 0.31, 0.31, 0.19, 0.5, 0.31, 0.19},    // AND
    {0.81, 0.31, 0.31, 0.19, 0.5, 0.31, 0.19},    // AND-NOT (0,0,1,0)
    {0.81, 0.31, 0.31, 0.19, 0.5, 0.31, 0.19},    // AND-NOT (0,1,0,0)
    {0.81, 0.31, 0.31, 0.19, 0.5, 0.31, 0.19},    // NOR
    {1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0},          // COPY (0,0,1,1)
    {1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0},          // COPY (0,1,0,1)
    {1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0},          // XOR
    {1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0},          // XNOR
    {1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0},          // NOT (1,0,1,0)
    {1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0},          // NOT (1,1,0,0)
    {0.81, 0.31, 0.31, 0.19, 0.5, 0.31, 0.19},    // OR
    {0.81, 0.31, 0.31, 0.19, 0.5, 0.31, 0.19},    // OR-NOT (1,0,1,1)
    {0.81, 0.31, 0.31, 0.19, 0.5, 0.31, 0.19},    // OR-NOT (1,1,0,1)
    {0.81, 0.31, 0.31, 0.19, 0.5, 0.31, 0.19},    // NAND
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},          // ONE
};

constexpr const char* kColumnNames[7] = {"h_out", "te_x", "te_y", "te_error",
                                         "fb_te_y", "fb_processed", "fb_error"};

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

Table1Result table1() {
  Table1Result result;
  result.csv = gate_catalog_csv();
  const auto order = catalog_order();
  for (std::size_t r = 0; r < order.size(); ++r) {
    const GateTERow row = analytic_gate_te(order[r]);
    const double got[7] = {row.h_out, row.te_x, row.te_y, row.te_error,
                           row.fb_te_y, row.fb_processed, row.fb_error};
    for (int c = 0; c < 7; ++c) {
      if (std::abs(round2(got[c]) - kReferenceTable[r][c]) > 1e-9) {
        result.mismatches.push_back(gate_name(order[r]) + " " + order[r].column_string() + " " +
                                    kColumnNames[c] + ": computed " + fixed6(got[c]) + ", expected " +
                                    fixed6(kReferenceTable[r][c]));
      }
    }
  }
  return result;
}

int cmd_table1(const fs::path& out_file) {
  const Table1Result t = table1();
  if (out_file.has_parent_path()) fs::create_directories(out_file.parent_path());
  write_text(out_file, t.csv);
  for (const auto& m : t.mismatches) std::fprintf(stderr, "table1 self-check: %s\n", m.c_str());
  return t.mismatches.empty() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// Evolution

namespace {

std::string replicate_dir_name(int id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "replicate_%03d", id);
  return buf;
}

void ensure_writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
}

}  // namespace

std::vector<RunResult> cmd_evolve(const ExperimentConfig& config, int threads) {
  ExperimentConfig cfg = config;
  cfg.normalize();
  const fs::path out = cfg.output_dir;
  ensure_writable_dir(out);
  write_json(out / "config.json", cfg);

  std::vector<RunResult> results = run_experiment(cfg.evolve, threads);

  std::string summary = "replicate,score,gate_count\n";
  for (const RunResult& r : results) {
    const fs::path dir = out / replicate_dir_name(r.replicate_id);
    ensure_writable_dir(dir);
    write_genome(dir / "genome.bin", r.champion_genome);
    write_json(dir / "genome.json", r.champion_genome);
    write_json(dir / "brain.json", r.champion_brain);
    write_json(dir / "run.json", r);
    write_text(dir / "trajectory.csv", trajectory_csv(r.trajectory));
    summary += std::to_string(r.replicate_id) + ',' + std::to_string(r.champion_score) + ',' +
               std::to_string(r.champion_brain.gates.size()) + '\n';
  }
  write_text(out / "summary.csv", summary);
  return results;
}

// ---------------------------------------------------------------------------
// Analysis commands

namespace {

Brain load_brain(const fs::path& file) {
  try {
    return read_json(file).get<Brain>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(file.string() + ": malformed brain file: " + e.what());
  }
}

}  // namespace

BrainReport cmd_analyze(const fs::path& brain_file, const TaskSpec& task,
                        const std::vector<double>& thresholds, const fs::path& out_dir) {
  const Brain brain = load_brain(brain_file);
  BrainReport report = analyze_brain(brain, task, thresholds);
  ensure_writable_dir(out_dir);
  write_brain_report(out_dir, report);
  return report;
}

std::vector<BrainReport> cmd_analyze_run(const fs::path& run_dir, const fs::path& out_dir) {
  const ExperimentConfig cfg = load_config(run_dir / "config.json");
  const TaskSpec task = make_task(cfg.task);
  std::vector<BrainReport> reports;
  for (int id = 0; id < cfg.evolve.replicates; ++id) {
    const fs::path brain_file = run_dir / replicate_dir_name(id) / "brain.json";
    if (!fs::exists(brain_file)) throw std::invalid_argument("missing " + brain_file.string());
    BrainReport r = analyze_brain(load_brain(brain_file), task, cfg.te_threshold_grid, id);
    write_brain_report(out_dir / replicate_dir_name(id), r);
    reports.push_back(std::move(r));
  }
  return reports;
}

// ---------------------------------------------------------------------------
// Batch reports

MeanCI mean_ci(const std::vector<double>& values) {
  MeanCI m;
  m.n = static_cast<int>(values.size());
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / m.n;
  if (m.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - m.mean) * (v - m.mean);
    m.se = std::sqrt(ss / (m.n - 1)) / std::sqrt(static_cast<double>(m.n));
  }
  return m;
}

std::vector<BrainReport> load_reports(const fs::path& in_dir) {
  if (!fs::is_directory(in_dir)) throw std::invalid_argument(in_dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(in_dir))
    if (entry.is_regular_file() && entry.path().filename() == "report.json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<BrainReport> reports;
  for (const auto& f : files) {
    try {
      reports.push_back(read_json(f).get<BrainReport>());
    } catch (const json::exception& e) {
      throw std::invalid_argument(f.string() + ": " + e.what());
    }
  }
  return reports;
}

BatchSummary summarize(const std::vector<BrainReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("no brain reports to summarize");
  BatchSummary s;
  s.task = reports.front().task;
  s.report_count = static_cast<int>(reports.size());
  std::vector<const BrainReport*> perfect;
  for (const auto& r : reports) {
    if (r.task != s.task) throw std::invalid_argument("reports mix tasks");
    if (r.perfect) perfect.push_back(&r);
  }
  s.perfect_count = static_cast<int>(perfect.size());
  if (perfect.empty()) throw std::invalid_argument("no perfect-score reports to summarize");

  std::vector<double> thresholds;
  for (const auto& p : perfect.front()->roc.points) thresholds.push_back(p.threshold);

  std::map<std::string, std::vector<double>> samples;
  std::vector<TEMatrix> te;
  std::vector<InfluenceMap> truth;
  for (const BrainReport* r : perfect) {
    std::vector<double> grid;
    for (const auto& p : r->roc.points) grid.push_back(p.threshold);
    if (grid != thresholds) throw std::invalid_argument("reports use different threshold grids");
    const FlowBounds& b = r->flow_bounds;
    const ConfusionCounts& c = r->confusion_at_zero;
    samples["gate_count"].push_back(r->gate_count);
    samples["essential_gate_count"].push_back(b.essential_gate_count);
    samples["correct_upper"].push_back(b.correct_upper);
    samples["error_lower"].push_back(b.error_lower);
    samples["per_gate_correct"].push_back(b.per_gate_correct);
    samples["per_gate_error"].push_back(b.per_gate_error);
    samples["hits"].push_back(c.hits);
    samples["misses"].push_back(c.misses);
    samples["false_alarms"].push_back(c.false_alarms);
    samples["correct_rejections"].push_back(c.correct_rejections);
    samples["hit_rate"].push_back(c.hit_rate());
    samples["fa_rate"].push_back(c.fa_rate());
    samples["influence_edges"].push_back(r->influence.edge_count());
    te.push_back(r->te);
    truth.push_back(r->influence);
  }
  for (const auto& [name, values] : samples) s.metrics[name] = mean_ci(values);
  // Excluded targets were applied when each report was scored; the sensors
  // are fixed at {0, 1} for every task.
  s.pooled_roc = pooled_roc_curve(te, truth, thresholds);
  return s;
}

namespace {

std::string ci_fields(const MeanCI& m) {
  if (!m.se) return fixed6(m.mean) + ",NA,NA,NA";
  return fixed6(m.mean) + ',' + fixed6(*m.se) + ',' + fixed6(m.mean - 1.96 * *m.se) + ',' +
         fixed6(m.mean + 1.96 * *m.se);
}

void write_gate_types(const fs::path& out, const std::vector<const BrainReport*>& perfect) {
  std::string per_brain = "replicate_id,set";
  for (const auto& n : gate_type_names()) per_brain += ',' + n;
  per_brain += '\n';
  std::string summary = "gate,n,all_mean,all_se,all_ci_low,all_ci_high,essential_mean,essential_se,"
                        "essential_ci_low,essential_ci_high\n";
  std::map<std::string, std::vector<double>> all, essential;
  for (const BrainReport* r : perfect) {
    std::string row_all = std::to_string(r->replicate_id) + ",all";
    std::string row_ess = std::to_string(r->replicate_id) + ",essential";
    for (const auto& n : gate_type_names()) {
      const int a = r->gate_histogram.count(n) ? r->gate_histogram.at(n) : 0;
      const int e = r->essential_gate_histogram.count(n) ? r->essential_gate_histogram.at(n) : 0;
      row_all += ',' + std::to_string(a);
      row_ess += ',' + std::to_string(e);
      all[n].push_back(a);
      essential[n].push_back(e);
    }
    per_brain += row_all + '\n' + row_ess + '\n';
  }
  for (const auto& n : gate_type_names()) {
    const MeanCI a = mean_ci(all[n]);
    summary += n + ',' + std::to_string(a.n) + ',' + ci_fields(a) + ',' + ci_fields(mean_ci(essential[n])) + '\n';
  }
  write_text(out / "gate_types_per_brain.csv", per_brain);
  write_text(out / "gate_types.csv", summary);
}

void write_mean_roc(const fs::path& out, const std::vector<const BrainReport*>& perfect) {
  std::string csv = "threshold,n,fa_rate_mean,fa_rate_se,hit_rate_mean,hit_rate_se\n";
  const auto& points = perfect.front()->roc.points;
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::vector<double> fa, hit;
    for (const BrainReport* r : perfect) {
      fa.push_back(r->roc.points[k].fa_rate);
      hit.push_back(r->roc.points[k].hit_rate);
    }
    const MeanCI f = mean_ci(fa), h = mean_ci(hit);
    csv += fixed6(points[k].threshold) + ',' + std::to_string(f.n) + ',' + fixed6(f.mean) + ',' +
           (f.se ? fixed6(*f.se) : "NA") + ',' + fixed6(h.mean) + ',' + (h.se ? fixed6(*h.se) : "NA") + '\n';
  }
  write_text(out / "roc_mean.csv", csv);
}

}  // namespace

BatchSummary cmd_report(const fs::path& in_dir, const fs::path& out_dir) {
  const std::vector<BrainReport> reports = load_reports(in_dir);
  const BatchSummary s = summarize(reports);
  ensure_writable_dir(out_dir);

  std::vector<const BrainReport*> perfect;
  for (const auto& r : reports)
    if (r.perfect) perfect.push_back(&r);

  std::string csv = "metric,n,mean,se,ci_low,ci_high\n";
  json metrics = json::object();
  for (const auto& [name, m] : s.metrics) {
    csv += name + ',' + std::to_string(m.n) + ',' + ci_fields(m) + '\n';
    metrics[name] = {{"n", m.n}, {"mean", m.mean}, {"se", m.se ? json(*m.se) : json(nullptr)}};
  }
  write_text(out_dir / "summary.csv", csv);
  write_json(out_dir / "summary.json", {{"task", task_name(s.task)},
                                        {"report_count", s.report_count},
                                        {"perfect_count", s.perfect_count},
                                        {"metrics", metrics}});
  write_gate_types(out_dir, perfect);
  write_text(out_dir / "roc_pooled.csv", roc_csv(s.pooled_roc));
  write_mean_roc(out_dir, perfect);

  json fit = nullptr;
  if (s.pooled_roc.fit) {
    json curve = json::array();
    std::string fit_csv = "fa_rate,hit_rate\n";
    for (int k = 1; k <= 99; ++k) {
      const double x = k / 100.0;
      fit_csv += fixed6(x) + ',' + fixed6((*s.pooled_roc.fit)(x)) + '\n';
    }
    write_text(out_dir / "roc_fit.csv", fit_csv);
    fit = *s.pooled_roc.fit;
  }
  write_json(out_dir / "roc_fit.json", {{"fit", fit}});
  return s;
}

}  // namespace mbflow
