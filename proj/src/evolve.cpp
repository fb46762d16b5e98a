#include "mbflow/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace mbflow {

void EvolveConfig::validate() const {
  if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
  if (tournament_size < 1 || tournament_size > population_size)
    throw std::invalid_argument("tournament_size must lie in [1, population_size]");
  if (elitism < 0 || elitism >= population_size)
    throw std::invalid_argument("elitism must lie in [0, population_size)");
  if (generations < 1) throw std::invalid_argument("generations must be >= 1");
  if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (initial_genome_length < kMinGenomeLength || initial_genome_length > kMaxGenomeLength)
    throw std::invalid_argument("initial_genome_length outside genome bounds");
  mutation.validate();
}

std::uint64_t replicate_seed(std::uint64_t master_seed, int replicate_id) {
  return mix_seed(master_seed, static_cast<std::uint64_t>(replicate_id));
}

std::size_t select_parent(std::span<const int> scores, int tournament_size, Rng& rng) {
  const std::size_t n = scores.size();
  const auto k = static_cast<std::size_t>(tournament_size);
  // Partial Fisher-Yates over a scratch index list: k distinct entrants.
  thread_local std::vector<std::size_t> pool;
  pool.resize(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::size_t winner = 0;
  int best = -1;
  std::size_t ties = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
    const std::size_t entrant = pool[i];
    const int s = scores[entrant];
    if (s > best) {
      best = s;
      winner = entrant;
      ties = 1;
    } else if (s == best) {
      // Reservoir sampling keeps each tied entrant equally likely.
      if (rng.below(++ties) == 0) winner = entrant;
    }
  }
  return winner;
}

RunResult evolve_population(const EvolveConfig& config, int replicate_id) {
  config.validate();
  const TaskSpec task = make_task(config.task);
  const auto pop_size = static_cast<std::size_t>(config.population_size);

  RunResult result;
  result.replicate_id = replicate_id;
  result.seed = replicate_seed(config.seed, replicate_id);
  Rng rng(result.seed);

  std::vector<Genome> population;
  population.reserve(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i)
    population.push_back(random_genome(config.initial_genome_length, rng.next()));

  std::vector<int> scores(pop_size);
  std::vector<std::size_t> order(pop_size);
  result.champion_score = -1;
  result.trajectory.reserve(static_cast<std::size_t>(config.generations));

  for (int gen = 0; gen < config.generations; ++gen) {
    long total = 0;
    for (std::size_t i = 0; i < pop_size; ++i) {
      scores[i] = score(decode(population[i], task.output_neurons), task);
      total += scores[i];
    }
    const auto best_it = std::max_element(scores.begin(), scores.end());
    const auto best_idx = static_cast<std::size_t>(best_it - scores.begin());
    result.trajectory.push_back({*best_it, static_cast<double>(total) / static_cast<double>(pop_size)});
    if (*best_it > result.champion_score) {
      result.champion_score = *best_it;
      result.champion_genome = population[best_idx];
    }
    if (gen + 1 == config.generations) break;

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<Genome> next;
    next.reserve(pop_size);
    for (int e = 0; e < config.elitism; ++e) next.push_back(population[order[static_cast<std::size_t>(e)]]);
    while (next.size() < pop_size) {
      const std::size_t parent = select_parent(scores, config.tournament_size, rng);
      next.push_back(mutate(population[parent], config.mutation, rng));
    }
    population = std::move(next);
  }

  result.champion_brain = decode(result.champion_genome, task.output_neurons);
  return result;
}

std::vector<RunResult> run_experiment(const EvolveConfig& config, int threads) {
  config.validate();
  const int replicates = config.replicates;
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, replicates);

  std::vector<RunResult> results(static_cast<std::size_t>(replicates));
  std::atomic<int> next_id{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (int id = next_id++; id < replicates; id = next_id++) {
      try {
        results[static_cast<std::size_t>(id)] = evolve_population(config, id);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace mbflow
