#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mbflow/core.hpp"
#include "mbflow/rng.hpp"

namespace mbflow {

inline constexpr std::size_t kMinGenomeLength = 1000;
inline constexpr std::size_t kMaxGenomeLength = 20000;
inline constexpr std::uint8_t kCodonFirst = 42;
inline constexpr std::uint8_t kCodonSecond = 213;
inline constexpr std::size_t kGenePayload = 7;
inline constexpr std::size_t kMaxGenes = 64;
inline constexpr std::size_t kPlantedCodons = 12;

struct Genome {
  std::vector<std::uint8_t> bytes;

  std::size_t size() const { return bytes.size(); }
  friend bool operator==(const Genome&, const Genome&) = default;
};

struct MutationRates {
  double point_rate = 0.005;   // per byte
  // Duplication outpaces deletion so genomes accumulate spare gene copies.
  double insert_rate = 1.0;    // per genome: duplicate one chunk
  double delete_rate = 0.2;    // per genome: delete one chunk
  std::size_t min_chunk = 16;
  std::size_t max_chunk = 512;

  /// Throws std::invalid_argument unless every rate is in [0,1] and the
  /// chunk bounds are ordered and positive.
  void validate() const;

  friend bool operator==(const MutationRates&, const MutationRates&) = default;
};

/// Offsets of every start codon whose 7-byte payload fits in the genome,
/// in genome order and capped at kMaxGenes.
std::vector<std::size_t> gene_offsets(const Genome& genome);

/// Translates each gene into a gate:
///   payload[0..2] mod 16 -> in_a, in_b, out;  payload[3..6] mod 2 -> truth column.
Brain decode(const Genome& genome, std::span<const NeuronIndex> outputs = {});

/// Point substitutions, then at most one chunk duplication and one chunk
/// deletion. Length stays within [kMinGenomeLength, kMaxGenomeLength].
Genome mutate(const Genome& genome, const MutationRates& rates, Rng& rng);
Genome mutate(const Genome& genome, const MutationRates& rates, std::uint64_t seed);

/// Uniform random bytes with kPlantedCodons start codons at random,
/// non-overlapping gene-sized slots. Throws std::out_of_range when `length`
/// is outside the genome length bounds.
Genome random_genome(std::size_t length, std::uint64_t seed);

}  // namespace mbflow
