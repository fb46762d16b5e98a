#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mbflow/core.hpp"
#include "mbflow/genome.hpp"
#include "mbflow/rng.hpp"
#include "mbflow/tasks.hpp"

namespace mbflow {

struct EvolveConfig {
  int population_size = 100;
  int generations = 2000;
  int replicates = 20;
  MutationRates mutation;
  int tournament_size = 5;
  int elitism = 1;
  std::uint64_t seed = 1;
  TaskKind task = TaskKind::MotionDetection;
  std::size_t initial_genome_length = 5000;

  void validate() const;

  friend bool operator==(const EvolveConfig&, const EvolveConfig&) = default;
};

struct GenerationStats {
  int best_score = 0;
  double mean_score = 0.0;
};

struct RunResult {
  Genome champion_genome;
  Brain champion_brain;
  int champion_score = 0;
  std::vector<GenerationStats> trajectory;
  int replicate_id = 0;
  std::uint64_t seed = 0;
};

/// Seed of one replicate, a pure function of the master seed and its id.
std::uint64_t replicate_seed(std::uint64_t master_seed, int replicate_id);

/// Tournament of `tournament_size` distinct individuals; the highest score
/// wins and ties among the best are broken uniformly at random.
std::size_t select_parent(std::span<const int> scores, int tournament_size, Rng& rng);

/// Evolves one population and returns its best-ever individual.
RunResult evolve_population(const EvolveConfig& config, int replicate_id);

/// Runs config.replicates independent populations on up to `threads`
/// workers (0 = hardware concurrency). Results are ordered by replicate id
/// and do not depend on the worker count.
std::vector<RunResult> run_experiment(const EvolveConfig& config, int threads = 0);

}  // namespace mbflow
