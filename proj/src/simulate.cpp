#include "grp/simulate.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "grp/advantage.hpp"
#include "grp/error.hpp"

namespace grp {

namespace {

// 53-bit uniform in [0, 1). Spelled out rather than using
// std::uniform_real_distribution so results match across standard libraries.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw(std::mt19937_64& rng, UniformRange r) {
  return r.lo + (r.hi - r.lo) * unit(rng);
}

bool valid_range(UniformRange r) {
  return r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi;
}

struct Accumulator {
  std::size_t wrong_positive = 0;
  double wrong_sum = 0.0;
  double correct_sum = 0.0;
  std::size_t ordering_violations = 0;

  void add_group(const std::vector<GroupSample>& group,
                 const std::vector<double>& adv) {
    double min_correct = std::numeric_limits<double>::infinity();
    double max_wrong = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (group[i].acc == 1.0) {
        correct_sum += adv[i];
        min_correct = std::min(min_correct, adv[i]);
      } else {
        wrong_sum += adv[i];
        max_wrong = std::max(max_wrong, adv[i]);
        if (adv[i] > 0.0) ++wrong_positive;
      }
    }
    if (max_wrong >= min_correct) ++ordering_violations;
  }

  EstimatorStats finish(std::size_t correct, std::size_t wrong) const {
    EstimatorStats s;
    s.wrong_positive = wrong_positive;
    s.wrong_positive_fraction =
        wrong ? static_cast<double>(wrong_positive) / wrong : 0.0;
    s.mean_wrong_advantage = wrong ? wrong_sum / wrong : 0.0;
    s.mean_correct_advantage = correct ? correct_sum / correct : 0.0;
    s.ordering_violations = ordering_violations;
    return s;
  }
};

}  // namespace

void HackingScenario::validate() const {
  if (groups == 0 || group_size == 0) {
    throw Error(ErrorKind::InvalidArgument,
                "groups and group_size must be positive");
  }
  if (!(frac_correct >= 0.0 && frac_correct <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "frac_correct must lie in [0, 1]");
  }
  if (!valid_range(correct_aux) || !valid_range(wrong_aux)) {
    throw Error(ErrorKind::InvalidArgument,
                "aux ranges must satisfy 0 <= lo <= hi <= 1");
  }
}

HackingReport simulate_hacking(const HackingScenario& scenario) {
  scenario.validate();
  std::mt19937_64 rng(scenario.seed);

  HackingReport report;
  report.scenario = scenario;
  Accumulator grpo;
  Accumulator scae;
  std::vector<GroupSample> group(scenario.group_size);
  std::vector<double> combined(scenario.group_size);
  std::vector<double> scae_adv(scenario.group_size);

  for (std::size_t g = 0; g < scenario.groups; ++g) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < scenario.group_size; ++i) {
      const bool ok = unit(rng) < scenario.frac_correct;
      group[i].acc = ok ? 1.0 : 0.0;
      group[i].aux = draw(rng, ok ? scenario.correct_aux : scenario.wrong_aux);
      combined[i] = group[i].acc + group[i].aux;
      correct += ok;
    }
    report.samples += scenario.group_size;
    report.correct_samples += correct;
    report.wrong_samples += scenario.group_size - correct;
    if (correct > 0 && correct < scenario.group_size) ++report.mixed_groups;

    const auto scae_out = scae_advantages(group);
    for (std::size_t i = 0; i < group.size(); ++i) {
      scae_adv[i] = scae_out.samples[i].advantage;
    }
    scae.add_group(group, scae_adv);
    grpo.add_group(group, grpo_advantages(combined));
  }

  report.grpo = grpo.finish(report.correct_samples, report.wrong_samples);
  report.scae = scae.finish(report.correct_samples, report.wrong_samples);
  return report;
}

}  // namespace grp
