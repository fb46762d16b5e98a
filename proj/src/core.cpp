#include "mbflow/core.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace mbflow {

std::string TruthTable::column_string() const {
  std::string s = "(";
  for (int row = 0; row < 4; ++row) {
    if (row > 0) s += ',';
    s += at(row) ? '1' : '0';
  }
  s += ')';
  return s;
}

std::string gate_name(TruthTable truth) {
  static constexpr std::array<const char*, 16> kNames = {
      "ZERO",    // 0000
      "NOR",     // (1,0,0,0)
      "AND-NOT", // (0,1,0,0)
      "NOT",     // (1,1,0,0)
      "AND-NOT", // (0,0,1,0)
      "NOT",     // (1,0,1,0)
      "XOR",     // (0,1,1,0)
      "NAND",    // (1,1,1,0)
      "AND",     // (0,0,0,1)
      "XNOR",    // (1,0,0,1)
      "COPY",    // (0,1,0,1)
      "OR-NOT",  // (1,1,0,1)
      "COPY",    // (0,0,1,1)
      "OR-NOT",  // (1,0,1,1)
      "OR",      // (0,1,1,1)
      "ONE",     // 1111
  };
  return kNames[truth.mask()];
}

void Brain::validate() const {
  auto in_range = [](NeuronIndex i) { return i < kNeuronCount; };
  for (const Gate& g : gates) {
    if (!in_range(g.in_a) || !in_range(g.in_b) || !in_range(g.out))
      throw std::invalid_argument("gate neuron index out of range [0,15]");
  }
  for (NeuronIndex s : sensors) {
    if (!in_range(s)) throw std::invalid_argument("sensor index out of range [0,15]");
    if (std::find(outputs.begin(), outputs.end(), s) != outputs.end())
      throw std::invalid_argument("sensor and output neuron sets overlap");
  }
  for (NeuronIndex o : outputs) {
    if (!in_range(o)) throw std::invalid_argument("output index out of range [0,15]");
  }
}

NeuronState step(const Brain& brain, NeuronState state, std::optional<Stimulus> stimulus) {
  std::uint32_t next = 0;
  for (const Gate& g : brain.gates) {
    next |= static_cast<std::uint32_t>(gate_eval(g, state)) << g.out;
  }
  NeuronState result(static_cast<std::uint16_t>(next));
  if (stimulus) {
    result.set(0, stimulus->s0);
    result.set(1, stimulus->s1);
  }
  return result;
}

namespace {

NeuronState initial_state(std::span<const Stimulus> stimuli) {
  if (stimuli.empty()) throw std::invalid_argument("trial has no stimulus frames");
  NeuronState s;
  s.set(0, stimuli.front().s0);
  s.set(1, stimuli.front().s1);
  return s;
}

}  // namespace

TrialRun run_trial(const Brain& brain, std::span<const Stimulus> stimuli, int post_input_steps) {
  TrialRun run;
  NeuronState state = initial_state(stimuli);
  run.states.reserve(stimuli.size() + static_cast<std::size_t>(post_input_steps) + 1);
  run.states.push_back(state);
  for (const Stimulus& frame : stimuli) {
    state = step(brain, state, frame);
    run.states.push_back(state);
  }
  for (int i = 0; i < post_input_steps; ++i) {
    state = step(brain, state, stimuli.back());
    run.states.push_back(state);
  }
  run.decision_state = state;
  return run;
}

NeuronState run_to_decision(const Brain& brain, std::span<const Stimulus> stimuli,
                            int post_input_steps) {
  NeuronState state = initial_state(stimuli);
  for (const Stimulus& frame : stimuli) state = step(brain, state, frame);
  for (int i = 0; i < post_input_steps; ++i) state = step(brain, state, stimuli.back());
  return state;
}

std::size_t Recording::transition_count() const {
  std::size_t n = 0;
  for (const auto& t : trials) n += t.empty() ? 0 : t.size() - 1;
  return n;
}

}  // namespace mbflow
