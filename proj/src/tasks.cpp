#include "mbflow/tasks.hpp"

#include <stdexcept>

namespace mbflow {

namespace {

constexpr Stimulus frame(int s0, int s1) { return Stimulus{s0 != 0, s1 != 0}; }

Motion md_label(Stimulus first, Stimulus second) {
  // One-pixel rightward shift with a free fill-in bit, and its mirror.
  const auto is = [&](Stimulus a, Stimulus b) { return first == a && second == b; };
  if (is(frame(1, 0), frame(0, 1)) || is(frame(1, 0), frame(1, 1)) || is(frame(1, 1), frame(0, 1)))
    return Motion::PreferredDirection;
  if (is(frame(0, 1), frame(1, 0)) || is(frame(0, 1), frame(1, 1)) || is(frame(1, 1), frame(1, 0)))
    return Motion::NullDirection;
  return Motion::Stationary;
}

}  // namespace

TaskSpec md_trials(int post_input_steps) {
  TaskSpec task;
  task.kind = TaskKind::MotionDetection;
  task.output_neurons = {14, 15};
  task.post_input_steps = post_input_steps;
  for (int p0 = 0; p0 < 4; ++p0) {
    for (int p1 = 0; p1 < 4; ++p1) {
      const Stimulus first = frame(p0 >> 1, p0 & 1);
      const Stimulus second = frame(p1 >> 1, p1 & 1);
      task.trials.push_back(Trial{{first, second}, static_cast<int>(md_label(first, second))});
    }
  }
  return task;
}

TaskSpec sl_trials(int post_input_steps) {
  TaskSpec task;
  task.kind = TaskKind::SoundLocalization;
  task.output_neurons = {11, 12, 13, 14, 15};
  task.post_input_steps = post_input_steps;
  // Pulse onset (left ear, right ear) per angle.
  static constexpr int kOnsets[kAngleCount][2] = {{0, 2}, {0, 1}, {0, 0}, {1, 0}, {2, 0}};
  for (int angle = 0; angle < kAngleCount; ++angle) {
    Trial t;
    t.label = angle;
    for (int step = 0; step < 3; ++step)
      t.stimuli.push_back(Stimulus{kOnsets[angle][0] == step, kOnsets[angle][1] == step});
    task.trials.push_back(std::move(t));
  }
  return task;
}

TaskSpec make_task(TaskKind kind) {
  return kind == TaskKind::MotionDetection ? md_trials() : sl_trials();
}

Motion classify_md(NeuronState decision, std::span<const NeuronIndex> outputs) {
  if (outputs.size() != 2) throw std::invalid_argument("motion detection needs 2 output neurons");
  return static_cast<Motion>(int{decision[outputs[0]]} + int{decision[outputs[1]]});
}

std::optional<int> classify_sl(NeuronState decision, std::span<const NeuronIndex> outputs) {
  if (outputs.size() != kAngleCount)
    throw std::invalid_argument("sound localization needs 5 output neurons");
  std::optional<int> found;
  for (int i = 0; i < kAngleCount; ++i) {
    if (!decision[outputs[static_cast<std::size_t>(i)]]) continue;
    if (found) return std::nullopt;
    found = i;
  }
  return found;
}

int classify(const TaskSpec& task, NeuronState decision) {
  if (task.kind == TaskKind::MotionDetection)
    return static_cast<int>(classify_md(decision, task.output_neurons));
  return classify_sl(decision, task.output_neurons).value_or(kNoLabel);
}

FitnessResult fitness(const Brain& brain, const TaskSpec& task) {
  FitnessResult result;
  result.per_trial.reserve(task.trials.size());
  for (const Trial& t : task.trials) {
    const bool correct =
        classify(task, run_to_decision(brain, t.stimuli, task.post_input_steps)) == t.label;
    result.per_trial.push_back(correct);
    result.score += correct;
  }
  return result;
}

int score(const Brain& brain, const TaskSpec& task) {
  int correct = 0;
  for (const Trial& t : task.trials)
    correct += classify(task, run_to_decision(brain, t.stimuli, task.post_input_steps)) == t.label;
  return correct;
}

Recording record(const Brain& brain, const TaskSpec& task) {
  Recording rec;
  rec.trials.reserve(task.trials.size());
  for (const Trial& t : task.trials)
    rec.trials.push_back(run_trial(brain, t.stimuli, task.post_input_steps).states);
  return rec;
}

std::string task_name(TaskKind kind) {
  return kind == TaskKind::MotionDetection ? "md" : "sl";
}

TaskKind parse_task(const std::string& name) {
  if (name == "md") return TaskKind::MotionDetection;
  if (name == "sl") return TaskKind::SoundLocalization;
  throw std::invalid_argument("unknown task '" + name + "' (expected md or sl)");
}

std::string label_name(TaskKind kind, int label) {
  if (label == kNoLabel) return "NONE";
  if (kind == TaskKind::MotionDetection) {
    switch (static_cast<Motion>(label)) {
      case Motion::NullDirection: return "ND";
      case Motion::Stationary: return "STATIONARY";
      case Motion::PreferredDirection: return "PD";
    }
    return "NONE";
  }
  return "A" + std::to_string(label);
}

}  // namespace mbflow
