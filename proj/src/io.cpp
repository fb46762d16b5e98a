#include "mbflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mbflow {

namespace {

NeuronIndex neuron_index(const json& v) {
  const int i = v.get<int>();
  if (i < 0 || i >= kNeuronCount) throw std::invalid_argument("neuron index out of range [0,15]");
  return static_cast<NeuronIndex>(i);
}

std::vector<NeuronIndex> neuron_list(const json& v) {
  std::vector<NeuronIndex> out;
  for (const auto& e : v) out.push_back(neuron_index(e));
  return out;
}

}  // namespace

void to_json(json& j, const Gate& g) {
  j = json{{"in_a", g.in_a},
           {"in_b", g.in_b},
           {"out", g.out},
           {"truth", {int{g.truth.at(0)}, int{g.truth.at(1)}, int{g.truth.at(2)}, int{g.truth.at(3)}}}};
}

void from_json(const json& j, Gate& g) {
  g.in_a = neuron_index(j.at("in_a"));
  g.in_b = neuron_index(j.at("in_b"));
  g.out = neuron_index(j.at("out"));
  const auto& t = j.at("truth");
  if (!t.is_array() || t.size() != 4) throw std::invalid_argument("gate truth must have 4 entries");
  bool bits[4];
  for (std::size_t k = 0; k < 4; ++k) {
    const int b = t[k].get<int>();
    if (b != 0 && b != 1) throw std::invalid_argument("gate truth entries must be 0 or 1");
    bits[k] = b == 1;
  }
  g.truth = TruthTable::from_column(bits[0], bits[1], bits[2], bits[3]);
}

void to_json(json& j, const Brain& b) {
  j = json{{"gates", b.gates}, {"sensors", b.sensors}, {"outputs", b.outputs}};
}

void from_json(const json& j, Brain& b) {
  b.gates = j.at("gates").get<std::vector<Gate>>();
  b.sensors = j.contains("sensors") ? neuron_list(j.at("sensors")) : std::vector<NeuronIndex>{0, 1};
  b.outputs = j.contains("outputs") ? neuron_list(j.at("outputs")) : std::vector<NeuronIndex>{};
  b.validate();
}

void to_json(json& j, const Genome& g) { j = g.bytes; }

void from_json(const json& j, Genome& g) {
  g.bytes.clear();
  for (const auto& v : j) {
    const int b = v.get<int>();
    if (b < 0 || b > 255) throw std::invalid_argument("genome bytes must lie in [0,255]");
    g.bytes.push_back(static_cast<std::uint8_t>(b));
  }
}

void to_json(json& j, const MutationRates& r) {
  j = json{{"point_rate", r.point_rate},
           {"insert_rate", r.insert_rate},
           {"delete_rate", r.delete_rate},
           {"min_chunk", r.min_chunk},
           {"max_chunk", r.max_chunk}};
}

void from_json(const json& j, MutationRates& r) {
  MutationRates d;
  r.point_rate = j.value("point_rate", d.point_rate);
  r.insert_rate = j.value("insert_rate", d.insert_rate);
  r.delete_rate = j.value("delete_rate", d.delete_rate);
  r.min_chunk = j.value("min_chunk", d.min_chunk);
  r.max_chunk = j.value("max_chunk", d.max_chunk);
  r.validate();
}

void to_json(json& j, const TaskSpec& t) {
  json trials = json::array();
  for (const Trial& trial : t.trials) {
    json stimuli = json::array();
    for (const Stimulus& s : trial.stimuli) stimuli.push_back({int{s.s0}, int{s.s1}});
    trials.push_back({{"stimuli", stimuli}, {"label", label_name(t.kind, trial.label)}});
  }
  j = json{{"kind", task_name(t.kind)},
           {"output_neurons", t.output_neurons},
           {"post_input_steps", t.post_input_steps},
           {"trials", trials}};
}

void to_json(json& j, const TEMatrix& m) { j = m.values; }

void from_json(const json& j, TEMatrix& m) {
  if (!j.is_array() || j.size() != kNeuronCount) throw std::invalid_argument("TE matrix must be 16x16");
  for (std::size_t i = 0; i < kNeuronCount; ++i) {
    if (!j[i].is_array() || j[i].size() != kNeuronCount)
      throw std::invalid_argument("TE matrix must be 16x16");
    for (std::size_t k = 0; k < kNeuronCount; ++k) m.values[i][k] = j[i][k].get<double>();
  }
}

void to_json(json& j, const InfluenceMap& m) {
  j = json::array();
  for (const auto& row : m.edges) {
    json r = json::array();
    for (bool e : row) r.push_back(int{e});
    j.push_back(r);
  }
}

void from_json(const json& j, InfluenceMap& m) {
  if (!j.is_array() || j.size() != kNeuronCount) throw std::invalid_argument("influence map must be 16x16");
  for (std::size_t i = 0; i < kNeuronCount; ++i) {
    if (!j[i].is_array() || j[i].size() != kNeuronCount)
      throw std::invalid_argument("influence map must be 16x16");
    for (std::size_t k = 0; k < kNeuronCount; ++k) m.edges[i][k] = j[i][k].get<int>() != 0;
  }
}

void to_json(json& j, const KnockoutReport& r) {
  json gates = json::array();
  for (const auto& e : r.gates)
    gates.push_back({{"gate", e.gate}, {"mutant_score", e.mutant_score}, {"essential", e.essential}});
  j = json{{"gates", gates}, {"essential_count", r.essential_count}, {"redundant_count", r.redundant_count}};
}

void from_json(const json& j, KnockoutReport& r) {
  r.gates.clear();
  for (const auto& g : j.at("gates"))
    r.gates.push_back({g.at("gate").get<std::size_t>(), g.at("mutant_score").get<int>(),
                       g.at("essential").get<bool>()});
  r.essential_count = j.at("essential_count").get<int>();
  r.redundant_count = j.at("redundant_count").get<int>();
}

void to_json(json& j, const FlowBounds& b) {
  j = json{{"correct_upper", b.correct_upper},
           {"error_lower", b.error_lower},
           {"per_gate_correct", b.per_gate_correct},
           {"per_gate_error", b.per_gate_error},
           {"essential_gate_count", b.essential_gate_count}};
}

void from_json(const json& j, FlowBounds& b) {
  b.correct_upper = j.at("correct_upper").get<double>();
  b.error_lower = j.at("error_lower").get<double>();
  b.per_gate_correct = j.at("per_gate_correct").get<double>();
  b.per_gate_error = j.at("per_gate_error").get<double>();
  b.essential_gate_count = j.at("essential_gate_count").get<int>();
}

void to_json(json& j, const ConfusionCounts& c) {
  j = json{{"hits", c.hits},
           {"misses", c.misses},
           {"false_alarms", c.false_alarms},
           {"correct_rejections", c.correct_rejections},
           {"hit_rate", c.hit_rate()},
           {"fa_rate", c.fa_rate()}};
}

void from_json(const json& j, ConfusionCounts& c) {
  c.hits = j.at("hits").get<int>();
  c.misses = j.at("misses").get<int>();
  c.false_alarms = j.at("false_alarms").get<int>();
  c.correct_rejections = j.at("correct_rejections").get<int>();
}

void to_json(json& j, const GaussianRocFit& f) {
  j = json{{"mu1", f.mu1}, {"sigma1", f.sigma1}, {"mu2", f.mu2}, {"sigma2", f.sigma2}};
}

void from_json(const json& j, GaussianRocFit& f) {
  f.mu1 = j.at("mu1").get<double>();
  f.sigma1 = j.at("sigma1").get<double>();
  f.mu2 = j.at("mu2").get<double>();
  f.sigma2 = j.at("sigma2").get<double>();
}

void to_json(json& j, const RocCurve& c) {
  json points = json::array();
  for (const auto& p : c.points) points.push_back({{"threshold", p.threshold}, {"counts", p.counts}});
  j = json{{"points", points}, {"fit", c.fit ? json(*c.fit) : json(nullptr)}};
}

void from_json(const json& j, RocCurve& c) {
  c.points.clear();
  for (const auto& p : j.at("points")) {
    RocPoint pt;
    pt.threshold = p.at("threshold").get<double>();
    pt.counts = p.at("counts").get<ConfusionCounts>();
    pt.fa_rate = pt.counts.fa_rate();
    pt.hit_rate = pt.counts.hit_rate();
    c.points.push_back(pt);
  }
  c.fit.reset();
  if (j.contains("fit") && !j.at("fit").is_null()) c.fit = j.at("fit").get<GaussianRocFit>();
}

void to_json(json& j, const RunResult& r) {
  json trajectory = json::array();
  for (const auto& g : r.trajectory) trajectory.push_back(g.best_score);
  j = json{{"replicate_id", r.replicate_id},
           {"seed", r.seed},
           {"champion_score", r.champion_score},
           {"gate_count", r.champion_brain.gates.size()},
           {"genome_length", r.champion_genome.size()},
           {"champion_brain", r.champion_brain},
           {"best_score_trajectory", trajectory}};
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);  // no "-0.000000"
  return buf;
}

std::string te_matrix_csv(const TEMatrix& m) {
  std::string out;
  for (const auto& row : m.values) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += fixed6(row[k]);
    }
    out += '\n';
  }
  return out;
}

std::string influence_map_csv(const InfluenceMap& m) {
  std::string out;
  for (const auto& row : m.edges) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += row[k] ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

std::string roc_csv(const RocCurve& c) {
  std::string out = "threshold,fa_rate,hit_rate,hits,misses,false_alarms,correct_rejections\n";
  for (const auto& p : c.points) {
    out += fixed6(p.threshold) + ',' + fixed6(p.fa_rate) + ',' + fixed6(p.hit_rate) + ',' +
           std::to_string(p.counts.hits) + ',' + std::to_string(p.counts.misses) + ',' +
           std::to_string(p.counts.false_alarms) + ',' + std::to_string(p.counts.correct_rejections) + '\n';
  }
  return out;
}

std::string trajectory_csv(const std::vector<GenerationStats>& trajectory) {
  std::string out = "generation,best_score,mean_score\n";
  for (std::size_t g = 0; g < trajectory.size(); ++g)
    out += std::to_string(g) + ',' + std::to_string(trajectory[g].best_score) + ',' +
           fixed6(trajectory[g].mean_score) + '\n';
  return out;
}

std::string gate_catalog_csv() {
  std::string out = "gate,truth,h_out,te_x,te_y,te_error,fb_te_y,fb_processed,fb_error\n";
  for (TruthTable t : catalog_order()) {
    const GateTERow r = analytic_gate_te(t);
    out += gate_name(t) + ",\"" + t.column_string() + "\"," + fixed6(r.h_out) + ',' + fixed6(r.te_x) +
           ',' + fixed6(r.te_y) + ',' + fixed6(r.te_error) + ',' + fixed6(r.fb_te_y) + ',' +
           fixed6(r.fb_processed) + ',' + fixed6(r.fb_error) + '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + '\n'); }

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

void write_genome(const std::filesystem::path& path, const Genome& genome) {
  std::string data(8, '\0');
  std::uint64_t n = genome.size();
  for (int i = 0; i < 8; ++i) data[static_cast<std::size_t>(i)] = static_cast<char>((n >> (8 * i)) & 0xFFu);
  data.append(reinterpret_cast<const char*>(genome.bytes.data()), genome.bytes.size());
  write_text(path, data);
}

Genome read_genome(const std::filesystem::path& path) {
  const std::string data = read_text(path);
  if (data.size() < 8) throw std::invalid_argument(path.string() + ": truncated genome header");
  std::uint64_t n = 0;
  for (int i = 7; i >= 0; --i) n = (n << 8) | static_cast<unsigned char>(data[static_cast<std::size_t>(i)]);
  if (n != data.size() - 8) throw std::invalid_argument(path.string() + ": genome length header mismatch");
  Genome g;
  g.bytes.assign(data.begin() + 8, data.end());
  return g;
}

}  // namespace mbflow
