#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mbflow/core.hpp"
#include "mbflow/tasks.hpp"

namespace mbflow {

/// Materialized one-step map of a Brain over all 2^16 states, without the
/// sensor overwrite.
class NextStateTable {
 public:
  explicit NextStateTable(const Brain& brain);

  NeuronState operator()(NeuronState s) const { return NeuronState(table_[s.bits()]); }

 private:
  std::vector<std::uint16_t> table_;
};

NextStateTable next_state_function(const Brain& brain);

/// Ground-truth one-step causal edges; (i, j) means N_i influences N_j.
struct InfluenceMap {
  std::array<std::array<bool, kNeuronCount>, kNeuronCount> edges{};

  bool operator()(int i, int j) const {
    return edges[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  int edge_count() const;

  friend bool operator==(const InfluenceMap&, const InfluenceMap&) = default;
};

/// Edge (i, j) iff flipping bit i changes bit j of the next state for at
/// least one of the 2^16 states. Columns of the brain's sensors are cleared.
InfluenceMap influence_map(const Brain& brain);

/// Diagnostic variant restricted to the given states (for example the
/// states visited while performing a task).
InfluenceMap influence_map_over(const Brain& brain, std::span<const NeuronState> states);

struct KnockoutEntry {
  std::size_t gate = 0;
  int mutant_score = 0;
  bool essential = false;
};

struct KnockoutReport {
  std::vector<KnockoutEntry> gates;
  int essential_count = 0;
  int redundant_count = 0;

  std::vector<std::size_t> essential_gates() const;
};

/// Removes each gate in turn and re-scores the mutant. Throws
/// std::domain_error when the intact brain is not perfect on the task.
KnockoutReport knockout_assay(const Brain& brain, const TaskSpec& task);

}  // namespace mbflow
