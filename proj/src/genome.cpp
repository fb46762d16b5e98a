#include "mbflow/genome.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace mbflow {

void MutationRates::validate() const {
  auto ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!ok(point_rate) || !ok(insert_rate) || !ok(delete_rate))
    throw std::invalid_argument("mutation rates must lie in [0,1]");
  if (min_chunk == 0 || min_chunk > max_chunk)
    throw std::invalid_argument("mutation chunk bounds must satisfy 0 < min <= max");
}

std::vector<std::size_t> gene_offsets(const Genome& genome) {
  std::vector<std::size_t> offsets;
  const auto& b = genome.bytes;
  const std::size_t gene_span = 2 + kGenePayload;
  if (b.size() < gene_span) return offsets;
  const std::size_t last = b.size() - gene_span;
  const std::uint8_t* base = b.data();
  std::size_t pos = 0;
  while (pos <= last && offsets.size() < kMaxGenes) {
    const void* hit = std::memchr(base + pos, kCodonFirst, last - pos + 1);
    if (hit == nullptr) break;
    pos = static_cast<std::size_t>(static_cast<const std::uint8_t*>(hit) - base);
    if (b[pos + 1] == kCodonSecond) offsets.push_back(pos);
    ++pos;
  }
  return offsets;
}

Brain decode(const Genome& genome, std::span<const NeuronIndex> outputs) {
  Brain brain;
  brain.outputs.assign(outputs.begin(), outputs.end());
  for (std::size_t offset : gene_offsets(genome)) {
    const std::uint8_t* p = genome.bytes.data() + offset + 2;
    Gate g;
    g.in_a = static_cast<NeuronIndex>(p[0] % kNeuronCount);
    g.in_b = static_cast<NeuronIndex>(p[1] % kNeuronCount);
    g.out = static_cast<NeuronIndex>(p[2] % kNeuronCount);
    g.truth = TruthTable::from_column(p[3] & 1u, p[4] & 1u, p[5] & 1u, p[6] & 1u);
    brain.gates.push_back(g);
  }
  return brain;
}

namespace {

std::size_t chunk_length(const MutationRates& rates, std::size_t genome_size, Rng& rng) {
  const std::size_t hi = std::min(rates.max_chunk, genome_size);
  const std::size_t lo = std::min(rates.min_chunk, hi);
  return rng.range(lo, hi);
}

void point_mutations(std::vector<std::uint8_t>& bytes, double rate, Rng& rng) {
  if (rate <= 0.0 || bytes.empty()) return;
  if (rate >= 1.0) {
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.below(256));
    return;
  }
  // Geometric skipping between mutated sites.
  const double log_keep = std::log1p(-rate);
  std::size_t pos = 0;
  while (true) {
    const double u = 1.0 - rng.uniform();  // (0, 1]
    const double gap = std::floor(std::log(u) / log_keep);
    if (gap >= static_cast<double>(bytes.size() - pos)) break;
    pos += static_cast<std::size_t>(gap);
    bytes[pos] = static_cast<std::uint8_t>(rng.below(256));
    if (++pos >= bytes.size()) break;
  }
}

}  // namespace

Genome mutate(const Genome& genome, const MutationRates& rates, Rng& rng) {
  Genome child = genome;
  auto& bytes = child.bytes;
  point_mutations(bytes, rates.point_rate, rng);

  if (rng.chance(rates.insert_rate) && !bytes.empty()) {
    std::size_t len = chunk_length(rates, bytes.size(), rng);
    const std::size_t src = rng.below(bytes.size() - len + 1);
    const std::size_t dst = rng.below(bytes.size() + 1);
    len = std::min(len, kMaxGenomeLength - std::min(kMaxGenomeLength, bytes.size()));
    if (len > 0) {
      std::vector<std::uint8_t> chunk(bytes.begin() + static_cast<std::ptrdiff_t>(src),
                                      bytes.begin() + static_cast<std::ptrdiff_t>(src + len));
      bytes.insert(bytes.begin() + static_cast<std::ptrdiff_t>(dst), chunk.begin(), chunk.end());
    }
  }

  if (rng.chance(rates.delete_rate) && !bytes.empty()) {
    std::size_t len = chunk_length(rates, bytes.size(), rng);
    const std::size_t at = rng.below(bytes.size() - len + 1);
    len = std::min(len, bytes.size() - std::min(bytes.size(), kMinGenomeLength));
    if (len > 0) {
      bytes.erase(bytes.begin() + static_cast<std::ptrdiff_t>(at),
                  bytes.begin() + static_cast<std::ptrdiff_t>(at + len));
    }
  }
  return child;
}

Genome mutate(const Genome& genome, const MutationRates& rates, std::uint64_t seed) {
  Rng rng(seed);
  return mutate(genome, rates, rng);
}

Genome random_genome(std::size_t length, std::uint64_t seed) {
  if (length < kMinGenomeLength || length > kMaxGenomeLength)
    throw std::out_of_range("genome length outside [1000, 20000]");
  Rng rng(seed);
  Genome g;
  g.bytes.resize(length);
  for (auto& b : g.bytes) b = static_cast<std::uint8_t>(rng.below(256));

  // Planting into disjoint gene-sized slots keeps every planted gene intact.
  const std::size_t gene_span = 2 + kGenePayload;
  const std::size_t slots = length / gene_span;
  std::vector<std::size_t> chosen;
  while (chosen.size() < kPlantedCodons) {
    const std::size_t slot = rng.below(slots);
    if (std::find(chosen.begin(), chosen.end(), slot) != chosen.end()) continue;
    chosen.push_back(slot);
    g.bytes[slot * gene_span] = kCodonFirst;
    g.bytes[slot * gene_span + 1] = kCodonSecond;
  }
  return g;
}

}  // namespace mbflow
