#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace grp {

// One rollout of a sampled group: binary accuracy reward plus an auxiliary
// (process) reward in [0, 1].
struct GroupSample {
  double acc = 0.0;
  double aux = 0.0;
};

enum class Stratum { Correct, Wrong };

std::string_view to_string(Stratum s);

struct GroupStats {
  double mean_acc = 0.0;
  std::optional<double> mean_aux_correct;  // absent for an empty stratum
  std::optional<double> mean_aux_wrong;
  std::size_t correct = 0;
  std::size_t wrong = 0;
};

struct AdvantageResult {
  double advantage = 0.0;
  Stratum stratum = Stratum::Wrong;
};

struct ScaeOutput {
  std::vector<AdvantageResult> samples;  // same order as the input
  GroupStats stats;
};

// Stratified clipping advantage estimation.
//
// The group is split by accuracy. Every sample first receives the accuracy
// baseline (acc - mean_acc). Auxiliary rewards are then compared against the
// mean of their own stratum only, and clipped asymmetrically:
//
//   correct:  A = (1 - mean_acc) + max(0, aux - mean_aux_correct)
//   wrong:    A = (0 - mean_acc) + min(0, aux - mean_aux_wrong)
//
// so a correct sample never drops below its baseline and a wrong sample never
// rises above it, whatever its auxiliary reward.
//
// Throws grp::Error(InvalidArgument) for an empty group, acc outside {0, 1},
// or aux outside [0, 1].
ScaeOutput scae_advantages(std::span<const GroupSample> group);

// Vanilla GRPO: (r - mean) / std with the population standard deviation.
// A degenerate group (std ~ 0) gets all-zero advantages. Throws on empty
// input or non-finite rewards.
std::vector<double> grpo_advantages(std::span<const double> rewards);

}  // namespace grp
