#pragma once

#include <cstddef>
#include <cstdint>

namespace grp {

struct UniformRange {
  double lo = 0.0;
  double hi = 1.0;
};

// Synthetic groups in which wrong rollouts carry inflated auxiliary rewards.
// The defaults are the reference witness scenario: wrong samples score
// U[0.8, 1.0] on structure while correct ones score U[0.1, 0.3].
struct HackingScenario {
  std::uint64_t seed = 0;
  std::size_t groups = 1000;
  std::size_t group_size = 8;
  double frac_correct = 0.25;
  UniformRange correct_aux{0.1, 0.3};
  UniformRange wrong_aux{0.8, 1.0};

  // Throws grp::Error(InvalidArgument) on empty sizes, probabilities outside
  // [0, 1], or ranges not inside [0, 1] with lo <= hi.
  void validate() const;
};

struct EstimatorStats {
  std::size_t wrong_positive = 0;  // wrong samples with advantage > 0
  double wrong_positive_fraction = 0.0;
  double mean_wrong_advantage = 0.0;
  double mean_correct_advantage = 0.0;
  // Groups where some wrong sample's advantage >= some correct sample's.
  std::size_t ordering_violations = 0;
};

struct HackingReport {
  HackingScenario scenario;
  std::size_t samples = 0;
  std::size_t correct_samples = 0;
  std::size_t wrong_samples = 0;
  std::size_t mixed_groups = 0;  // groups with both strata present
  EstimatorStats grpo;           // standardized acc + aux
  EstimatorStats scae;
};

// Deterministic for a fixed scenario: all randomness comes from a
// mt19937_64 seeded with scenario.seed.
HackingReport simulate_hacking(const HackingScenario& scenario);

}  // namespace grp
