#include "mbflow/groundtruth.hpp"

#include <stdexcept>

namespace mbflow {

NextStateTable::NextStateTable(const Brain& brain) : table_(kStateCount, 0) {
  for (const Gate& g : brain.gates) {
    const std::uint16_t out_bit = static_cast<std::uint16_t>(1u << g.out);
    for (std::uint32_t s = 0; s < kStateCount; ++s) {
      if (gate_eval(g, NeuronState(static_cast<std::uint16_t>(s)))) table_[s] |= out_bit;
    }
  }
}

NextStateTable next_state_function(const Brain& brain) { return NextStateTable(brain); }

int InfluenceMap::edge_count() const {
  int n = 0;
  for (const auto& row : edges)
    for (bool e : row) n += e;
  return n;
}

namespace {

void clear_sensor_columns(InfluenceMap& map, const Brain& brain) {
  for (NeuronIndex s : brain.sensors)
    for (auto& row : map.edges) row[s] = false;
}

}  // namespace

InfluenceMap influence_map(const Brain& brain) {
  const NextStateTable next(brain);
  InfluenceMap map;
  for (int i = 0; i < kNeuronCount; ++i) {
    const std::uint32_t flip = 1u << i;
    std::uint16_t changed = 0;
    for (std::uint32_t s = 0; s < kStateCount; ++s) {
      if (s & flip) continue;  // each unordered pair {s, s^flip} once
      const NeuronState a(static_cast<std::uint16_t>(s));
      changed |= static_cast<std::uint16_t>(next(a).bits() ^ next(a.flipped(i)).bits());
    }
    for (int j = 0; j < kNeuronCount; ++j)
      map.edges[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (changed >> j) & 1u;
  }
  clear_sensor_columns(map, brain);
  return map;
}

InfluenceMap influence_map_over(const Brain& brain, std::span<const NeuronState> states) {
  InfluenceMap map;
  for (NeuronState s : states) {
    const NeuronState base = step(brain, s);
    for (int i = 0; i < kNeuronCount; ++i) {
      const std::uint16_t changed = base.bits() ^ step(brain, s.flipped(i)).bits();
      for (int j = 0; j < kNeuronCount; ++j)
        if ((changed >> j) & 1u) map.edges[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
    }
  }
  clear_sensor_columns(map, brain);
  return map;
}

std::vector<std::size_t> KnockoutReport::essential_gates() const {
  std::vector<std::size_t> out;
  for (const auto& e : gates)
    if (e.essential) out.push_back(e.gate);
  return out;
}

KnockoutReport knockout_assay(const Brain& brain, const TaskSpec& task) {
  const int perfect = task.perfect_score();
  if (score(brain, task) != perfect)
    throw std::domain_error("knockout assay requires a brain with a perfect score");
  KnockoutReport report;
  for (std::size_t g = 0; g < brain.gates.size(); ++g) {
    Brain mutant = brain;
    mutant.gates.erase(mutant.gates.begin() + static_cast<std::ptrdiff_t>(g));
    const int s = score(mutant, task);
    const bool essential = s < perfect;
    report.gates.push_back({g, s, essential});
    (essential ? report.essential_count : report.redundant_count) += 1;
  }
  return report;
}

}  // namespace mbflow
