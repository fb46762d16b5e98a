#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "mbflow/app.hpp"
#include "oracles.hpp"

using namespace mbflow;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "mbflow_test_app" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Every regular file below `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_text(e.path());
  return files;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MBFLOW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig tiny_config(const fs::path& out) {
  ExperimentConfig c;
  c.evolve.replicates = 2;
  c.evolve.generations = 10;
  c.evolve.population_size = 12;
  c.seed = 5;
  c.output_dir = out.string();
  c.normalize();
  return c;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_text(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("experiment config round-trips through JSON") {
  ExperimentConfig c = preset("sl-desk");
  c.te_threshold_grid = {0.0, 0.1, 0.7};
  c.evolve.mutation.point_rate = 0.0125;
  c.normalize();
  const json j = c;
  CHECK(j.get<ExperimentConfig>() == c);
  CHECK(json::parse(j.dump()).get<ExperimentConfig>() == c);

  json bad = j;
  bad["te_threshold_grid"] = {0.5, 0.2};
  CHECK_THROWS_AS(bad.get<ExperimentConfig>(), std::invalid_argument);
  bad = j;
  bad["task"] = "xx";
  CHECK_THROWS_AS(bad.get<ExperimentConfig>(), std::invalid_argument);
}

TEST_CASE("shipped preset files match the built-in presets") {
  for (const std::string name : {"md-desk", "sl-desk"}) {
    const ExperimentConfig built_in = preset(name);
    CHECK(load_config(preset_directory() / (name + ".json")) == built_in);
    CHECK(built_in.evolve.replicates == 20);
    CHECK(built_in.evolve.generations == 2000);
    CHECK(built_in.evolve.population_size == 100);
  }
  CHECK(preset("md-desk").task == TaskKind::MotionDetection);
  CHECK(preset("sl-desk").task == TaskKind::SoundLocalization);
  CHECK_THROWS_AS(preset("nope"), std::invalid_argument);
}

TEST_CASE("gate catalog output") {
  const Table1Result t = table1();
  CHECK(t.mismatches.empty());
  const fs::path dir = scratch("table1");
  REQUIRE(cmd_table1(dir / "a.csv") == 0);
  REQUIRE(cmd_table1(dir / "b.csv") == 0);
  CHECK(read_text(dir / "a.csv") == read_text(dir / "b.csv"));

  const auto rows = read_csv(dir / "a.csv");
  REQUIRE(rows.size() == 17);
  // The truth column is quoted "(a,b,c,d)", so it spans four comma cells.
  auto numeric = [](const std::vector<std::string>& r) { return std::vector<std::string>(r.end() - 7, r.end()); };
  const auto& and_row = rows[2];
  CHECK(and_row[0] == "AND");
  std::vector<double> and_vals;
  for (const auto& s : numeric(and_row)) and_vals.push_back(std::round(std::stod(s) * 100) / 100);
  CHECK(and_vals == std::vector<double>{0.81, 0.31, 0.31, 0.19, 0.5, 0.31, 0.19});
  CHECK(rows[8][0] == "XOR");
  CHECK(rows[9][0] == "XNOR");
  CHECK(numeric(rows[8]) == numeric(rows[9]));
}

TEST_CASE("gate histograms") {
  const Brain b = oracle::hand_md_brain();
  const GateHistogram h = gate_histogram(b);
  CHECK(h.size() == gate_type_names().size());
  CHECK(gate_type_names().size() == 12);
  CHECK(h.at("COPY") == 2);
  CHECK(h.at("AND") == 2);
  CHECK(h.at("AND-NOT") == 1);
  CHECK(h.at("OR-NOT") == 1);
  int total = 0;
  for (const auto& [name, n] : h) total += n;
  CHECK(total == 6);
}

TEST_CASE("analysis of a hand-built perfect brain") {
  const BrainReport r = analyze_brain(oracle::hand_md_brain(), md_trials(), default_thresholds(), 3);
  CHECK(r.perfect);
  CHECK(r.score == 16);
  REQUIRE(r.knockout.has_value());
  int hist_total = 0;
  for (const auto& [name, n] : r.essential_gate_histogram) hist_total += n;
  CHECK(hist_total == r.knockout->essential_count);
  CHECK(r.flow_bounds.essential_gate_count == r.knockout->essential_count);
  CHECK(r.roc.points.size() == default_thresholds().size());
  CHECK(r.roc.points[0].counts == r.confusion_at_zero);

  const json j = r;
  const BrainReport back = j.get<BrainReport>();
  CHECK(json(back) == j);
}

TEST_CASE("imperfect brains are flagged and skip the knockout") {
  const BrainReport r = analyze_brain(Brain{}, md_trials(), default_thresholds());
  CHECK_FALSE(r.perfect);
  CHECK_FALSE(r.knockout.has_value());
  CHECK(r.flow_bounds.essential_gate_count == 0);
  CHECK(r.influence.edge_count() == 0);
}

TEST_CASE("single copy brain: one edge carrying positive TE") {
  const fs::path dir = scratch("copy");
  Brain b;
  b.gates = {oracle::gate(0, 0, 3, 0, 0, 1, 1)};
  b.outputs = {14, 15};
  write_json(dir / "brain.json", b);
  const BrainReport r = cmd_analyze(dir / "brain.json", md_trials(), default_thresholds(), dir / "out");
  CHECK(r.influence.edge_count() == 1);
  CHECK(r.influence(0, 3));
  CHECK(r.te(0, 3) > 0.0);
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK_FALSE(fs::exists(dir / "out" / "knockout.json"));

  write_text(dir / "broken.json", "{\"gates\": [{\"in_a\": 1}]}");
  CHECK_THROWS_AS(cmd_analyze(dir / "broken.json", md_trials(), default_thresholds(), dir / "x"),
                  std::invalid_argument);
}

TEST_CASE("analysis artifacts are deterministic and self-consistent") {
  const fs::path dir = scratch("consistent");
  write_json(dir / "brain.json", oracle::hand_sl_brain());
  const BrainReport r = cmd_analyze(dir / "brain.json", sl_trials(), default_thresholds(), dir / "a");
  cmd_analyze(dir / "brain.json", sl_trials(), default_thresholds(), dir / "b");
  CHECK(snapshot(dir / "a") == snapshot(dir / "b"));

  // Recompute threshold-0 confusion from the emitted CSVs.
  const auto te = read_csv(dir / "a" / "te_matrix.csv");
  const auto im = read_csv(dir / "a" / "influence_map.csv");
  REQUIRE(te.size() == 16);
  REQUIRE(im.size() == 16);
  ConfusionCounts c;
  for (int i = 0; i < 16; ++i)
    for (int j = 2; j < 16; ++j) {
      const bool predicted = std::stod(te[i][j]) > 0.0;
      const bool edge = im[i][j] == "1";
      if (edge) (predicted ? c.hits : c.misses)++;
      else (predicted ? c.false_alarms : c.correct_rejections)++;
    }
  CHECK(c == r.confusion_at_zero);
}

TEST_CASE("evolve writes one result set per replicate and reruns identically") {
  const fs::path a = scratch("evolve_a");
  const fs::path b = scratch("evolve_b");
  const auto results = cmd_evolve(tiny_config(a), 2);
  CHECK(results.size() == 2);
  for (const std::string rep : {"replicate_000", "replicate_001"})
    for (const std::string f : {"genome.bin", "genome.json", "brain.json", "run.json", "trajectory.csv"})
      CHECK(fs::exists(a / rep / f));
  const auto summary = read_csv(a / "summary.csv");
  REQUIRE(summary.size() == 3);
  CHECK(summary[0] == std::vector<std::string>{"replicate", "score", "gate_count"});
  CHECK(read_genome(a / "replicate_001" / "genome.bin") == results[1].champion_genome);

  ExperimentConfig cb = tiny_config(b);
  cmd_evolve(cb, 1);
  auto sa = snapshot(a), sb = snapshot(b);
  // config.json records its own output directory.
  sa.erase("config.json");
  sb.erase("config.json");
  CHECK(sa == sb);

  ExperimentConfig blocked = tiny_config(a / "summary.csv" / "sub");
  CHECK_THROWS_AS(cmd_evolve(blocked, 1), std::runtime_error);
}

TEST_CASE("mean and confidence interval") {
  const MeanCI one = mean_ci({2.5});
  CHECK(one.mean == 2.5);
  CHECK_FALSE(one.se.has_value());
  const MeanCI two = mean_ci({1.0, 1.0});
  REQUIRE(two.se.has_value());
  CHECK(*two.se == 0.0);
  const MeanCI m = mean_ci({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == 2.5);
  CHECK(*m.se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("reports aggregate perfect brains") {
  const fs::path dir = scratch("report");
  const BrainReport r = analyze_brain(oracle::hand_md_brain(), md_trials(), default_thresholds(), 0);
  write_brain_report(dir / "in1" / "replicate_000", r);

  const BatchSummary one = cmd_report(dir / "in1", dir / "out1");
  CHECK(one.perfect_count == 1);
  CHECK(one.metrics.at("error_lower").mean == doctest::Approx(r.flow_bounds.error_lower));
  CHECK_FALSE(one.metrics.at("error_lower").se.has_value());
  const auto rows = read_csv(dir / "out1" / "summary.csv");
  bool saw_na = false;
  for (const auto& row : rows)
    if (row[0] == "error_lower") saw_na = row[3] == "NA";
  CHECK(saw_na);
  for (const std::string f : {"summary.csv", "summary.json", "gate_types.csv", "gate_types_per_brain.csv",
                              "roc_pooled.csv", "roc_mean.csv", "roc_fit.json"})
    CHECK(fs::exists(dir / "out1" / f));

  BrainReport copy = r;
  copy.replicate_id = 1;
  write_brain_report(dir / "in1" / "replicate_001", copy);
  const BatchSummary two = cmd_report(dir / "in1", dir / "out2");
  CHECK(two.perfect_count == 2);
  CHECK(*two.metrics.at("error_lower").se == 0.0);
  CHECK(two.pooled_roc.points[0].counts.hits == 2 * r.confusion_at_zero.hits);

  fs::create_directories(dir / "empty");
  CHECK_THROWS_AS(cmd_report(dir / "empty", dir / "out3"), std::invalid_argument);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  CHECK(run_cli("table1 --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "table1.csv"));
  CHECK(run_cli("") == 1);
  CHECK(run_cli("bogus") == 1);
  CHECK(run_cli("evolve --task zz") == 1);
  CHECK(run_cli("evolve --preset nope") == 1);
  CHECK(run_cli("report --in " + dir.string() + " --out " + (dir / "r").string()) == 1);

  write_json(dir / "tiny.json", tiny_config(dir / "run"));
  CHECK(run_cli("evolve --config " + (dir / "tiny.json").string() + " --threads 1") == 0);
  CHECK(fs::exists(dir / "run" / "replicate_001" / "brain.json"));
  CHECK(run_cli("analyze --run " + (dir / "run").string() + " --out " + (dir / "an").string()) == 0);
  CHECK(fs::exists(dir / "an" / "replicate_000" / "report.json"));
  write_json(dir / "brain.json", oracle::hand_md_brain());
  CHECK(run_cli("analyze --brain " + (dir / "brain.json").string() + " --task md --out " + (dir / "one").string()) ==
        0);
  CHECK(run_cli("report --in " + (dir / "one").string() + " --out " + (dir / "rep").string()) == 0);
  CHECK(fs::exists(dir / "rep" / "roc_pooled.csv"));
}
