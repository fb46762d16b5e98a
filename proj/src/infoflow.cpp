#include "mbflow/infoflow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace mbflow {

namespace {

double clamp_residue(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

double binary_entropy(double p) {
  const double q = 1.0 - p;
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (q > 0.0) h -= q * std::log2(q);
  return h;
}

// p * log2(num / den) computed from integer counts; exactly 0 when the
// ratio is exactly 1.
double weighted_log_ratio(std::uint64_t weight, std::uint64_t total, std::uint64_t num,
                          std::uint64_t den) {
  if (weight == 0 || num == den) return 0.0;
  return static_cast<double>(weight) / static_cast<double>(total) *
         std::log2(static_cast<double>(num) / static_cast<double>(den));
}

}  // namespace

double entropy(std::span<const double> distribution) {
  double sum = 0.0;
  for (double p : distribution) {
    if (p < 0.0 || !std::isfinite(p)) throw std::invalid_argument("probabilities must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
  double h = 0.0;
  for (double p : distribution)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double transfer_entropy(const JointCounts& c) {
  if (c.total == 0) return 0.0;
  double te = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const std::uint64_t c_y = c.at(0, y, 0) + c.at(0, y, 1) + c.at(1, y, 0) + c.at(1, y, 1);
      const std::uint64_t c_xy = c.at(x, y, 0) + c.at(x, y, 1);
      for (int yn = 0; yn < 2; ++yn) {
        const std::uint64_t c_xyz = c.at(x, y, yn);
        const std::uint64_t c_yz = c.at(0, y, yn) + c.at(1, y, yn);
        te += weighted_log_ratio(c_xyz, c.total, c_xyz * c_y, c_xy * c_yz);
      }
    }
  }
  return clamp_residue(te);
}

double processed_information(const JointCounts& c) {
  if (c.total == 0) return 0.0;
  std::uint64_t joint[2][2] = {};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int yn = 0; yn < 2; ++yn) joint[y][yn] += c.at(x, y, yn);
  double mi = 0.0;
  for (int y = 0; y < 2; ++y) {
    for (int yn = 0; yn < 2; ++yn) {
      const std::uint64_t c_y = joint[y][0] + joint[y][1];
      const std::uint64_t c_yn = joint[0][yn] + joint[1][yn];
      mi += weighted_log_ratio(joint[y][yn], c.total, joint[y][yn] * c.total, c_y * c_yn);
    }
  }
  return clamp_residue(mi);
}

namespace {

void check_segments(std::span<const std::vector<std::uint8_t>> source,
                    std::span<const std::vector<std::uint8_t>> target) {
  if (source.size() != target.size())
    throw std::invalid_argument("source and target have different segment counts");
  for (std::size_t s = 0; s < source.size(); ++s) {
    if (source[s].size() != target[s].size())
      throw std::invalid_argument("source and target series lengths differ");
    for (std::size_t t = 0; t < source[s].size(); ++t)
      if (source[s][t] > 1 || target[s][t] > 1)
        throw std::invalid_argument("series must be binary");
  }
}

std::uint64_t history(const std::vector<std::uint8_t>& series, std::size_t end, int length) {
  std::uint64_t h = 0;
  for (int i = length - 1; i >= 0; --i) h = (h << 1) | series[end - static_cast<std::size_t>(i)];
  return h;
}

double higher_order_te(std::span<const std::vector<std::uint8_t>> source,
                       std::span<const std::vector<std::uint8_t>> target, int k, int l) {
  using Key = std::tuple<std::uint64_t, std::uint64_t, int>;  // (x hist, y hist, y next)
  std::map<Key, std::uint64_t> joint;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> c_xy;
  std::map<std::pair<std::uint64_t, int>, std::uint64_t> c_yz;
  std::map<std::uint64_t, std::uint64_t> c_y;
  std::uint64_t total = 0;
  const auto lag = static_cast<std::size_t>(std::max(k, l) - 1);
  for (std::size_t s = 0; s < source.size(); ++s) {
    const auto& xs = source[s];
    const auto& ys = target[s];
    for (std::size_t t = lag; t + 1 < ys.size(); ++t) {
      const std::uint64_t xh = history(xs, t, k);
      const std::uint64_t yh = history(ys, t, l);
      const int yn = ys[t + 1];
      ++joint[{xh, yh, yn}];
      ++c_xy[{xh, yh}];
      ++c_yz[{yh, yn}];
      ++c_y[yh];
      ++total;
    }
  }
  if (total == 0) throw std::invalid_argument("series too short for the requested history");
  double te = 0.0;
  for (const auto& [key, c] : joint) {
    const auto& [xh, yh, yn] = key;
    te += weighted_log_ratio(c, total, c * c_y[yh], c_xy[{xh, yh}] * c_yz[{yh, yn}]);
  }
  return clamp_residue(te);
}

}  // namespace

double transfer_entropy(std::span<const std::vector<std::uint8_t>> source_segments,
                        std::span<const std::vector<std::uint8_t>> target_segments, int k, int l) {
  if (k < 1 || l < 1 || k > 16 || l > 16)
    throw std::invalid_argument("history lengths must lie in [1,16]");
  check_segments(source_segments, target_segments);
  if (k != 1 || l != 1) return higher_order_te(source_segments, target_segments, k, l);

  JointCounts counts;
  for (std::size_t s = 0; s < source_segments.size(); ++s) {
    const auto& xs = source_segments[s];
    const auto& ys = target_segments[s];
    for (std::size_t t = 0; t + 1 < ys.size(); ++t) counts.add(xs[t], ys[t], ys[t + 1]);
  }
  if (counts.total == 0) throw std::invalid_argument("series too short: need at least 2 samples");
  return transfer_entropy(counts);
}

double transfer_entropy(std::span<const std::uint8_t> source, std::span<const std::uint8_t> target,
                        int k, int l) {
  if (source.size() != target.size())
    throw std::invalid_argument("source and target series lengths differ");
  const std::vector<std::uint8_t> xs(source.begin(), source.end());
  const std::vector<std::uint8_t> ys(target.begin(), target.end());
  return transfer_entropy(std::span(&xs, 1), std::span(&ys, 1), k, l);
}

double processed_information(std::span<const std::vector<std::uint8_t>> segments) {
  JointCounts counts;
  for (const auto& ys : segments) {
    for (std::uint8_t v : ys)
      if (v > 1) throw std::invalid_argument("series must be binary");
    for (std::size_t t = 0; t + 1 < ys.size(); ++t) counts.add(false, ys[t], ys[t + 1]);
  }
  if (counts.total == 0) throw std::invalid_argument("series too short: need at least 2 samples");
  return processed_information(counts);
}

GateTERow analytic_gate_te(TruthTable truth) {
  // Inputs (a, b) are independent and uniform, so each of the four rows has
  // probability 1/4 and each conditional slice has probability 1/2.
  const auto ones = [&](int r0, int r1) { return (truth.at(r0) + truth.at(r1)) / 2.0; };
  GateTERow row;
  row.gate_truth = truth;
  row.h_out = binary_entropy((truth.at(0) + truth.at(1) + truth.at(2) + truth.at(3)) / 4.0);
  const double h_given_a = 0.5 * (binary_entropy(ones(0, 1)) + binary_entropy(ones(2, 3)));
  const double h_given_b = 0.5 * (binary_entropy(ones(0, 2)) + binary_entropy(ones(1, 3)));

  row.te_x = clamp_residue(row.h_out - h_given_a);
  row.te_y = clamp_residue(row.h_out - h_given_b);
  row.te_error = clamp_residue(row.h_out - row.te_x - row.te_y);

  // Feedback loop: first slot Y, second slot Z_t. For a deterministic gate
  // TE_{Y->Z} = H(Z_{t+1} | Z_t).
  row.fb_te_y = h_given_b;
  row.fb_processed = row.te_y;
  row.fb_error = truth.classify() == GateClass::Polyadic
                     ? std::abs(row.fb_te_y - row.fb_processed)
                     : 0.0;
  return row;
}

std::vector<TruthTable> catalog_order() {
  std::vector<TruthTable> order;
  static constexpr bool kColumns[16][4] = {
      {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 1},
      {0, 1, 0, 1}, {0, 1, 1, 0}, {1, 0, 0, 1}, {1, 0, 1, 0}, {1, 1, 0, 0}, {0, 1, 1, 1},
      {1, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}, {1, 1, 1, 1},
  };
  for (const auto& c : kColumns) order.push_back(TruthTable::from_column(c[0], c[1], c[2], c[3]));
  return order;
}

InteractionInfo interaction_information(TruthTable truth) {
  const GateTERow row = analytic_gate_te(truth);
  // Z is a function of (X, Y), so I(X,Y : Z) = H(Z).
  InteractionInfo info;
  info.value = row.te_x + row.te_y - row.h_out;
  if (info.value < -1.0 + 1e-9)
    info.secrecy = Secrecy::Encrypting;
  else if (info.value < -1e-9)
    info.secrecy = Secrecy::Obfuscating;
  else
    info.secrecy = Secrecy::Transparent;
  return info;
}

const char* secrecy_name(Secrecy s) {
  switch (s) {
    case Secrecy::Transparent: return "transparent";
    case Secrecy::Obfuscating: return "obfuscating";
    case Secrecy::Encrypting: return "encrypting";
  }
  return "transparent";
}

FlowBounds brain_flow_bounds(const Brain& brain, std::span<const std::size_t> essential_gates) {
  FlowBounds bounds;
  for (std::size_t idx : essential_gates) {
    if (idx >= brain.gates.size()) throw std::out_of_range("essential gate index out of range");
    const Gate& g = brain.gates[idx];
    if (g.has_feedback()) {
      // The catalog's feedback columns put Z in the second slot.
      const TruthTable t = g.out == g.in_b ? g.truth : g.truth.swapped_inputs();
      const GateTERow row = analytic_gate_te(t);
      bounds.correct_upper += row.fb_te_y + row.fb_processed;
      bounds.error_lower += row.fb_error;
    } else {
      const GateTERow row = analytic_gate_te(g.truth);
      bounds.correct_upper += row.te_x + row.te_y;
      bounds.error_lower += row.te_error;
    }
  }
  bounds.essential_gate_count = static_cast<int>(essential_gates.size());
  if (bounds.essential_gate_count > 0) {
    bounds.per_gate_correct = bounds.correct_upper / bounds.essential_gate_count;
    bounds.per_gate_error = bounds.error_lower / bounds.essential_gate_count;
  }
  return bounds;
}

double TEMatrix::max() const {
  double m = 0.0;
  for (const auto& row : values)
    for (double v : row) m = std::max(m, v);
  return m;
}

TEMatrix te_matrix(const Recording& recording) {
  std::vector<std::pair<NeuronState, NeuronState>> transitions;
  transitions.reserve(recording.transition_count());
  for (const auto& trial : recording.trials)
    for (std::size_t t = 0; t + 1 < trial.size(); ++t) transitions.emplace_back(trial[t], trial[t + 1]);
  if (transitions.empty()) throw std::invalid_argument("recording has no state transitions");

  TEMatrix m;
  for (int j = 0; j < kNeuronCount; ++j) {
    for (int i = 0; i < kNeuronCount; ++i) {
      JointCounts counts;
      for (const auto& [now, next] : transitions) counts.add(now[i], now[j], next[j]);
      m.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          i == j ? processed_information(counts) : transfer_entropy(counts);
    }
  }
  return m;
}

}  // namespace mbflow
