#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "mbflow/tasks.hpp"
#include "oracles.hpp"

using namespace mbflow;

namespace {

int label_of(const TaskSpec& t, Stimulus a, Stimulus b) {
  for (const Trial& trial : t.trials)
    if (trial.stimuli[0] == a && trial.stimuli[1] == b) return trial.label;
  return kNoLabel;
}

constexpr int kPD = static_cast<int>(Motion::PreferredDirection);
constexpr int kND = static_cast<int>(Motion::NullDirection);
constexpr int kStat = static_cast<int>(Motion::Stationary);

}  // namespace

TEST_CASE("motion trials enumerate 16 pairs split 3/3/10") {
  const TaskSpec t = md_trials();
  REQUIRE(t.trials.size() == 16);
  CHECK(t.post_input_steps == 2);
  CHECK(t.output_neurons == std::vector<NeuronIndex>{14, 15});
  int pd = 0, nd = 0, stat = 0;
  std::set<std::pair<int, int>> seen;
  for (const Trial& trial : t.trials) {
    REQUIRE(trial.stimuli.size() == 2);
    seen.insert({trial.stimuli[0].s0 * 2 + trial.stimuli[0].s1, trial.stimuli[1].s0 * 2 + trial.stimuli[1].s1});
    pd += trial.label == kPD;
    nd += trial.label == kND;
    stat += trial.label == kStat;
  }
  CHECK(seen.size() == 16);
  CHECK(pd == 3);
  CHECK(nd == 3);
  CHECK(stat == 10);

  const Stimulus s00{false, false}, s10{true, false}, s01{false, true}, s11{true, true};
  CHECK(label_of(t, s00, s00) == kStat);
  CHECK(label_of(t, s10, s01) == kPD);
  CHECK(label_of(t, s10, s11) == kPD);
  CHECK(label_of(t, s11, s01) == kPD);
  CHECK(label_of(t, s01, s10) == kND);
}

TEST_CASE("sensor swap maps PD to ND and fixes stationary") {
  const TaskSpec t = md_trials();
  auto swap = [](Stimulus s) { return Stimulus{s.s1, s.s0}; };
  for (const Trial& trial : t.trials) {
    const int mirrored = label_of(t, swap(trial.stimuli[0]), swap(trial.stimuli[1]));
    if (trial.label == kPD) CHECK(mirrored == kND);
    if (trial.label == kND) CHECK(mirrored == kPD);
    if (trial.label == kStat) CHECK(mirrored == kStat);
  }
}

TEST_CASE("sound localization trials") {
  const TaskSpec t = sl_trials();
  REQUIRE(t.trials.size() == 5);
  CHECK(t.post_input_steps == 1);
  CHECK(t.output_neurons == std::vector<NeuronIndex>{11, 12, 13, 14, 15});
  const std::vector<Stimulus> a2{{true, true}, {false, false}, {false, false}};
  CHECK(t.trials[2].stimuli == a2);
  for (int i = 0; i < 5; ++i) CHECK(t.trials[static_cast<std::size_t>(i)].label == i);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(t.trials[0].stimuli[k].s0 == t.trials[4].stimuli[k].s1);
    CHECK(t.trials[0].stimuli[k].s1 == t.trials[4].stimuli[k].s0);
  }
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i + 1; j < 5; ++j) CHECK_FALSE(t.trials[i].stimuli == t.trials[j].stimuli);
}

TEST_CASE("motion decoding sums the two output bits") {
  const std::vector<NeuronIndex> out{14, 15};
  NeuronState s;
  CHECK(classify_md(s, out) == Motion::NullDirection);
  s.set(14, true);
  CHECK(classify_md(s, out) == Motion::Stationary);
  s = NeuronState();
  s.set(15, true);
  CHECK(classify_md(s, out) == Motion::Stationary);
  s.set(14, true);
  CHECK(classify_md(s, out) == Motion::PreferredDirection);
  // Other neurons are ignored.
  CHECK(classify_md(NeuronState(0x3FFF), out) == Motion::NullDirection);
}

TEST_CASE("localization decoding is strictly one-hot") {
  const std::vector<NeuronIndex> out{11, 12, 13, 14, 15};
  NeuronState s;
  CHECK_FALSE(classify_sl(s, out).has_value());
  s.set(13, true);
  CHECK(classify_sl(s, out) == 2);
  s = NeuronState();
  s.set(11, true);
  s.set(12, true);
  CHECK_FALSE(classify_sl(s, out).has_value());
  CHECK(classify(sl_trials(), s) == kNoLabel);
}

TEST_CASE("empty brain scores") {
  const Brain empty;
  CHECK(score(empty, md_trials()) == 3);
  CHECK(score(empty, sl_trials()) == 0);
  const FitnessResult f = fitness(empty, md_trials());
  CHECK(f.score == 3);
  CHECK(std::count(f.per_trial.begin(), f.per_trial.end(), true) == 3);
}

TEST_CASE("hand-built circuits solve both tasks") {
  CHECK(score(oracle::hand_md_brain(), md_trials()) == 16);
  CHECK(score(oracle::hand_sl_brain(), sl_trials()) == 5);
  const Brain b = oracle::hand_md_brain();
  CHECK(score(b, md_trials()) == score(b, md_trials()));
}

TEST_CASE("recording shape") {
  const Recording r = record(oracle::hand_sl_brain(), sl_trials());
  REQUIRE(r.trials.size() == 5);
  for (const auto& trial : r.trials) CHECK(trial.size() == 3 + 1 + 1);
  CHECK(r.transition_count() == 5 * 4);
}

TEST_CASE("task names") {
  CHECK(task_name(TaskKind::MotionDetection) == "md");
  CHECK(parse_task("sl") == TaskKind::SoundLocalization);
  CHECK_THROWS_AS(parse_task("xx"), std::invalid_argument);
  CHECK(label_name(TaskKind::MotionDetection, kPD) == "PD");
  CHECK(label_name(TaskKind::SoundLocalization, 3) == "A3");
}
