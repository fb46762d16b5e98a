#pragma once

// Markov Brain network model: 16 binary neurons wired by deterministic
// 2-to-1 logic gates, updated synchronously one step at a time.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mbflow {

inline constexpr int kNeuronCount = 16;
inline constexpr std::uint32_t kStateCount = 1u << kNeuronCount;

using NeuronIndex = std::uint8_t;

/// Firing pattern of all 16 neurons; bit i holds neuron N_i.
class NeuronState {
 public:
  constexpr NeuronState() = default;
  constexpr explicit NeuronState(std::uint16_t bits) : bits_(bits) {}

  constexpr bool operator[](int i) const { return (bits_ >> i) & 1u; }

  constexpr void set(int i, bool value) {
    const auto mask = static_cast<std::uint16_t>(1u << i);
    bits_ = value ? static_cast<std::uint16_t>(bits_ | mask)
                  : static_cast<std::uint16_t>(bits_ & ~mask);
  }

  constexpr NeuronState flipped(int i) const {
    return NeuronState(static_cast<std::uint16_t>(bits_ ^ (1u << i)));
  }

  constexpr std::uint16_t bits() const { return bits_; }

  friend constexpr bool operator==(NeuronState, NeuronState) = default;

 private:
  std::uint16_t bits_ = 0;
};

/// Pattern presented on the two sensor neurons (N_0, N_1) for one step.
struct Stimulus {
  bool s0 = false;
  bool s1 = false;

  friend constexpr bool operator==(Stimulus, Stimulus) = default;
};

enum class GateClass { Constant, MonadicA, MonadicB, Polyadic };

/// Output column of a 2-to-1 gate for inputs (a,b) = 00, 01, 10, 11.
/// Stored as a 4-bit mask where bit (2a + b) is the output for (a, b).
class TruthTable {
 public:
  constexpr TruthTable() = default;
  constexpr explicit TruthTable(std::uint8_t mask) : mask_(mask & 0xFu) {}

  /// Builds a table from the column written in (00,01,10,11) order.
  static constexpr TruthTable from_column(bool o00, bool o01, bool o10, bool o11) {
    return TruthTable(static_cast<std::uint8_t>(o00 | (o01 << 1) | (o10 << 2) | (o11 << 3)));
  }

  constexpr bool operator()(bool a, bool b) const { return (mask_ >> (2 * a + b)) & 1u; }
  constexpr bool at(int row) const { return (mask_ >> row) & 1u; }
  constexpr std::uint8_t mask() const { return mask_; }

  constexpr bool depends_on_a() const { return at(0) != at(2) || at(1) != at(3); }
  constexpr bool depends_on_b() const { return at(0) != at(1) || at(2) != at(3); }

  constexpr GateClass classify() const {
    if (depends_on_a() && depends_on_b()) return GateClass::Polyadic;
    if (depends_on_a()) return GateClass::MonadicA;
    if (depends_on_b()) return GateClass::MonadicB;
    return GateClass::Constant;
  }

  /// Same function with the two inputs exchanged.
  constexpr TruthTable swapped_inputs() const {
    return from_column(at(0), at(2), at(1), at(3));
  }

  constexpr TruthTable complemented() const {
    return TruthTable(static_cast<std::uint8_t>(~mask_ & 0xFu));
  }

  /// "(0,0,0,1)" style rendering of the column.
  std::string column_string() const;

  friend constexpr bool operator==(TruthTable, TruthTable) = default;

 private:
  std::uint8_t mask_ = 0;
};

/// Canonical gate name (ZERO, AND, AND-NOT, NOR, COPY, XOR, XNOR, NOT, OR,
/// OR-NOT, NAND, ONE). Asymmetric variants share a name.
std::string gate_name(TruthTable truth);

struct Gate {
  NeuronIndex in_a = 0;
  NeuronIndex in_b = 0;
  NeuronIndex out = 0;
  TruthTable truth;

  bool has_feedback() const { return out == in_a || out == in_b; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

constexpr bool gate_eval(const Gate& gate, NeuronState state) {
  return gate.truth(state[gate.in_a], state[gate.in_b]);
}

struct Brain {
  std::vector<Gate> gates;
  std::vector<NeuronIndex> sensors{0, 1};
  std::vector<NeuronIndex> outputs;

  /// Throws std::invalid_argument on out-of-range indices or when the
  /// sensor and output sets overlap.
  void validate() const;

  friend bool operator==(const Brain&, const Brain&) = default;
};

/// One synchronous update. Every neuron is the OR of the gates writing it
/// (0 when unwritten); a present stimulus then overwrites N_0 and N_1.
NeuronState step(const Brain& brain, NeuronState state,
                 std::optional<Stimulus> stimulus = std::nullopt);

struct TrialRun {
  std::vector<NeuronState> states;
  NeuronState decision_state;
};

/// Runs one trial from the all-zero state. The first recorded state carries
/// stimuli[0] on the sensors; each stimulus frame then drives one update,
/// followed by `post_input_steps` updates holding the final frame.
/// Produces stimuli.size() + post_input_steps + 1 states.
TrialRun run_trial(const Brain& brain, std::span<const Stimulus> stimuli, int post_input_steps);

/// Same trajectory as run_trial, returning only the final state.
NeuronState run_to_decision(const Brain& brain, std::span<const Stimulus> stimuli,
                            int post_input_steps);

/// Neuron state sequences of every trial of a task, in trial order.
struct Recording {
  std::vector<std::vector<NeuronState>> trials;

  std::size_t transition_count() const;
};

}  // namespace mbflow
