#pragma once

#include <span>
#include <variant>
#include <vector>

namespace grp {

// Per-token log-probabilities of one sampled completion under the current,
// behaviour (old), and reference policies.
struct SequenceLogProbs {
  std::vector<double> logp_new;
  std::vector<double> logp_old;
  std::vector<double> logp_ref;
  // One value broadcast to every token, or one value per token.
  std::variant<double, std::vector<double>> advantage = 0.0;
};

struct ObjectiveConfig {
  double epsilon = 0.2;  // clip radius
  double beta = 0.04;    // KL coefficient
};

struct TokenTerm {
  double ratio = 0.0;
  double clipped_ratio = 0.0;
  double advantage = 0.0;
  double surrogate = 0.0;  // min(ratio * A, clip(ratio) * A)
  double kl = 0.0;
};

struct SequenceTerm {
  std::vector<TokenTerm> tokens;
  double surrogate_mean = 0.0;
  double kl_mean = 0.0;
  double value = 0.0;  // token mean of (surrogate - beta * kl)
};

struct ObjectiveResult {
  double objective = 0.0;  // group mean of sequence values
  double surrogate_mean = 0.0;
  double kl_mean = 0.0;
  std::vector<SequenceTerm> sequences;
};

// Clipped-surrogate GRPO objective evaluated on raw log-probabilities.
// Throws grp::Error(InvalidArgument) on empty input, length mismatch,
// positive or non-finite log-probabilities, epsilon <= 0, or beta < 0.
ObjectiveResult grpo_objective(std::span<const SequenceLogProbs> group,
                               const ObjectiveConfig& config);

// Per-token k3 estimator of KL(new || ref):
//   exp(ref - new) - (ref - new) - 1  (>= 0)
std::vector<double> kl_estimate(std::span<const double> logp_new,
                                std::span<const double> logp_ref);

}  // namespace grp
