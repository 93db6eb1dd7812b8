#include "grp/advantage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grp/error.hpp"

namespace grp {

std::string_view to_string(Stratum s) {
  return s == Stratum::Correct ? "correct" : "wrong";
}

ScaeOutput scae_advantages(std::span<const GroupSample> group) {
  if (group.empty()) {
    throw Error(ErrorKind::InvalidArgument, "group has no samples");
  }
  // Sums are taken relative to the first aux value of each stratum so that a
  // tied stratum has exactly that value as its mean.
  double pivot[2] = {0.0, 0.0};  // [wrong, correct]
  double aux_sum[2] = {0.0, 0.0};
  std::size_t count[2] = {0, 0};
  for (std::size_t i = 0; i < group.size(); ++i) {
    const GroupSample& s = group[i];
    if (s.acc != 0.0 && s.acc != 1.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "sample " + std::to_string(i) +
                      ": accuracy reward must be 0 or 1, got " +
                      std::to_string(s.acc));
    }
    if (!(s.aux >= 0.0 && s.aux <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument,
                  "sample " + std::to_string(i) +
                      ": auxiliary reward must lie in [0, 1], got " +
                      std::to_string(s.aux));
    }
    const int k = s.acc == 1.0 ? 1 : 0;
    if (count[k] == 0) pivot[k] = s.aux;
    aux_sum[k] += s.aux - pivot[k];
    ++count[k];
  }

  ScaeOutput out;
  out.stats.correct = count[1];
  out.stats.wrong = count[0];
  out.stats.mean_acc =
      static_cast<double>(count[1]) / static_cast<double>(group.size());
  if (count[1]) out.stats.mean_aux_correct = pivot[1] + aux_sum[1] / count[1];
  if (count[0]) out.stats.mean_aux_wrong = pivot[0] + aux_sum[0] / count[0];

  const double mean_acc = out.stats.mean_acc;
  out.samples.reserve(group.size());
  for (const GroupSample& s : group) {
    AdvantageResult r;
    if (s.acc == 1.0) {
      r.stratum = Stratum::Correct;
      r.advantage =
          (1.0 - mean_acc) + std::max(0.0, s.aux - *out.stats.mean_aux_correct);
    } else {
      r.stratum = Stratum::Wrong;
      r.advantage =
          (0.0 - mean_acc) + std::min(0.0, s.aux - *out.stats.mean_aux_wrong);
    }
    out.samples.push_back(r);
  }
  return out;
}

std::vector<double> grpo_advantages(std::span<const double> rewards) {
  if (rewards.empty()) {
    throw Error(ErrorKind::InvalidArgument, "group has no rewards");
  }
  double sum = 0.0;
  for (double r : rewards) {
    if (!std::isfinite(r)) {
      throw Error(ErrorKind::InvalidArgument, "reward is not finite");
    }
    sum += r;
  }
  const double n = static_cast<double>(rewards.size());
  const double mean = sum / n;
  double sq = 0.0;
  for (double r : rewards) sq += (r - mean) * (r - mean);
  const double std = std::sqrt(sq / n);

  std::vector<double> out(rewards.size(), 0.0);
  // Rounding in the mean leaves a tiny nonzero spread for identical rewards.
  const double scale = std::max(1.0, std::abs(mean));
  if (std <= 1e-12 * scale) return out;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    out[i] = (rewards[i] - mean) / std;
  }
  return out;
}

}  // namespace grp
