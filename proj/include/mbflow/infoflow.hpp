#pragma once

// Entropy, transfer entropy and the analytic per-gate information catalog.
// All quantities are in bits.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mbflow/core.hpp"

namespace mbflow {

/// Shannon entropy -sum p log2 p with 0 log 0 = 0. Throws
/// std::invalid_argument when an entry is negative or the sum is not 1
/// within 1e-9.
double entropy(std::span<const double> distribution);

/// Counts of (x_t, y_t, y_{t+1}) triples for first-order transfer entropy.
struct JointCounts {
  std::array<std::uint64_t, 8> counts{};  // index 4*x + 2*y + y_next
  std::uint64_t total = 0;

  void add(bool x, bool y, bool y_next) {
    ++counts[4u * x + 2u * y + y_next];
    ++total;
  }
  std::uint64_t at(bool x, bool y, bool y_next) const { return counts[4u * x + 2u * y + y_next]; }
};

/// Plug-in I(Y_{t+1} : X_t | Y_t) from accumulated counts.
double transfer_entropy(const JointCounts& counts);

/// Plug-in I(Y_t : Y_{t+1}) from the same counts (X marginalized).
double processed_information(const JointCounts& counts);

/// TE_{X->Y} with source history length k and target history length l over
/// one aligned pair of binary series. Throws std::invalid_argument on a
/// length mismatch, non-binary values, or fewer than two usable samples.
double transfer_entropy(std::span<const std::uint8_t> source, std::span<const std::uint8_t> target,
                        int k = 1, int l = 1);

/// Same estimator with samples pooled over independent segments (trials);
/// no (t, t+1) pair crosses a segment boundary.
double transfer_entropy(std::span<const std::vector<std::uint8_t>> source_segments,
                        std::span<const std::vector<std::uint8_t>> target_segments,
                        int k = 1, int l = 1);

/// I(Y_t : Y_{t+1}) pooled over segments.
double processed_information(std::span<const std::vector<std::uint8_t>> segments);

/// One row of the 2-to-1 gate catalog, computed for independent uniform
/// inputs. Without feedback Z = f(X, Y); with feedback Z = f(Y, Z), Z in
/// the second input slot.
struct GateTERow {
  TruthTable gate_truth;
  double h_out = 0.0;
  double te_x = 0.0;
  double te_y = 0.0;
  double te_error = 0.0;
  double fb_te_y = 0.0;
  double fb_processed = 0.0;
  double fb_error = 0.0;
};

GateTERow analytic_gate_te(TruthTable truth);

/// The 16 gates in catalog order (ZERO, AND, AND-NOT, AND-NOT, NOR, COPY,
/// COPY, XOR, XNOR, NOT, NOT, OR, OR-NOT, OR-NOT, NAND, ONE).
std::vector<TruthTable> catalog_order();

enum class Secrecy { Transparent, Obfuscating, Encrypting };

struct InteractionInfo {
  double value = 0.0;  // I(X:Y:Z) = I(X:Z) + I(Y:Z) - I(X,Y:Z)
  Secrecy secrecy = Secrecy::Transparent;
};

InteractionInfo interaction_information(TruthTable truth);

const char* secrecy_name(Secrecy s);

/// Analytic bounds on what TE gets right and wrong over a set of gates.
struct FlowBounds {
  double correct_upper = 0.0;
  double error_lower = 0.0;
  double per_gate_correct = 0.0;
  double per_gate_error = 0.0;
  int essential_gate_count = 0;
};

/// Sums catalog columns over the given gate indices, using the feedback
/// columns for gates whose output is one of their inputs. Throws
/// std::out_of_range for an index past the end of brain.gates.
FlowBounds brain_flow_bounds(const Brain& brain, std::span<const std::size_t> essential_gates);

/// Pairwise TE between neurons. Entry (i, j) is TE_{N_i -> N_j}; the
/// diagonal holds processed information I(N_j,t : N_j,t+1).
struct TEMatrix {
  std::array<std::array<double, kNeuronCount>, kNeuronCount> values{};

  double operator()(int i, int j) const {
    return values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  double max() const;

  friend bool operator==(const TEMatrix&, const TEMatrix&) = default;
};

/// Throws std::invalid_argument when the recording has no transitions.
TEMatrix te_matrix(const Recording& recording);

}  // namespace mbflow
