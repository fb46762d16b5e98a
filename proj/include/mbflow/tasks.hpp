#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mbflow/core.hpp"

namespace mbflow {

enum class TaskKind { MotionDetection, SoundLocalization };

/// Motion-detection labels; the value equals the expected sum of the two
/// output bits.
enum class Motion : int { NullDirection = 0, Stationary = 1, PreferredDirection = 2 };

inline constexpr int kAngleCount = 5;
inline constexpr int kNoLabel = -1;

struct Trial {
  std::vector<Stimulus> stimuli;
  int label = kNoLabel;  // Motion value for MD, angle index 0..4 for SL
};

struct TaskSpec {
  TaskKind kind = TaskKind::MotionDetection;
  std::vector<Trial> trials;
  std::vector<NeuronIndex> output_neurons;
  int post_input_steps = 0;

  int perfect_score() const { return static_cast<int>(trials.size()); }
};

inline constexpr int kDefaultMdPostSteps = 2;
inline constexpr int kDefaultSlPostSteps = 1;

/// All 16 ordered pairs of 2-bit frames, classed PD / ND / STATIONARY.
TaskSpec md_trials(int post_input_steps = kDefaultMdPostSteps);

/// Five 3-frame pulse sequences, one per source angle A0..A4.
TaskSpec sl_trials(int post_input_steps = kDefaultSlPostSteps);

TaskSpec make_task(TaskKind kind);

Motion classify_md(NeuronState decision, std::span<const NeuronIndex> outputs);

/// Angle index whose neuron is the only active output, else nullopt.
std::optional<int> classify_sl(NeuronState decision, std::span<const NeuronIndex> outputs);

/// Label predicted for `decision` under the task, kNoLabel when undecodable.
int classify(const TaskSpec& task, NeuronState decision);

struct FitnessResult {
  int score = 0;
  std::vector<bool> per_trial;
};

FitnessResult fitness(const Brain& brain, const TaskSpec& task);

/// Correct-trial count only; the hot path of evolution.
int score(const Brain& brain, const TaskSpec& task);

/// Full state sequences of every trial.
Recording record(const Brain& brain, const TaskSpec& task);

std::string task_name(TaskKind kind);             // "md" / "sl"
TaskKind parse_task(const std::string& name);     // throws std::invalid_argument
std::string label_name(TaskKind kind, int label); // "PD", "A3", ...

}  // namespace mbflow
