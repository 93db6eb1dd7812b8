#include "grp/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grp/error.hpp"

namespace grp {

namespace {

void check_logprobs(std::span<const double> lp, const char* which,
                    std::size_t seq) {
  for (double v : lp) {
    if (!std::isfinite(v) || v > 0.0) {
      throw Error(ErrorKind::InvalidArgument,
                  "sequence " + std::to_string(seq) + ": " + which +
                      " log-probabilities must be finite and <= 0");
    }
  }
}

double k3(double logp_new, double logp_ref) {
  const double delta = logp_ref - logp_new;
  // expm1 keeps small deltas accurate; the clamp guards the last ulp.
  return std::max(0.0, std::expm1(delta) - delta);
}

}  // namespace

std::vector<double> kl_estimate(std::span<const double> logp_new,
                                std::span<const double> logp_ref) {
  if (logp_new.size() != logp_ref.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "kl_estimate: length mismatch (" +
                    std::to_string(logp_new.size()) + " vs " +
                    std::to_string(logp_ref.size()) + ")");
  }
  std::vector<double> out(logp_new.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = k3(logp_new[t], logp_ref[t]);
  }
  return out;
}

ObjectiveResult grpo_objective(std::span<const SequenceLogProbs> group,
                               const ObjectiveConfig& config) {
  if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) {
    throw Error(ErrorKind::InvalidArgument, "epsilon must be > 0");
  }
  if (!(config.beta >= 0.0) || !std::isfinite(config.beta)) {
    throw Error(ErrorKind::InvalidArgument, "beta must be >= 0");
  }
  if (group.empty()) {
    throw Error(ErrorKind::InvalidArgument, "group has no sequences");
  }

  const double lo = 1.0 - config.epsilon;
  const double hi = 1.0 + config.epsilon;

  ObjectiveResult result;
  result.sequences.reserve(group.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    const SequenceLogProbs& s = group[i];
    const std::size_t n = s.logp_new.size();
    if (n == 0 || s.logp_old.size() != n || s.logp_ref.size() != n) {
      throw Error(ErrorKind::InvalidArgument,
                  "sequence " + std::to_string(i) +
                      ": log-probability lists must be non-empty and of "
                      "equal length");
    }
    check_logprobs(s.logp_new, "new", i);
    check_logprobs(s.logp_old, "old", i);
    check_logprobs(s.logp_ref, "ref", i);

    const auto* per_token = std::get_if<std::vector<double>>(&s.advantage);
    if (per_token && per_token->size() != n) {
      throw Error(ErrorKind::InvalidArgument,
                  "sequence " + std::to_string(i) +
                      ": per-token advantage length mismatch");
    }

    SequenceTerm seq;
    seq.tokens.reserve(n);
    double surr_sum = 0.0;
    double kl_sum = 0.0;
    double value_sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      TokenTerm tok;
      tok.advantage = per_token ? (*per_token)[t] : std::get<double>(s.advantage);
      if (!std::isfinite(tok.advantage)) {
        throw Error(ErrorKind::InvalidArgument,
                    "sequence " + std::to_string(i) +
                        ": advantage is not finite");
      }
      tok.ratio = std::exp(s.logp_new[t] - s.logp_old[t]);
      tok.clipped_ratio = std::clamp(tok.ratio, lo, hi);
      tok.surrogate = std::min(tok.ratio * tok.advantage,
                               tok.clipped_ratio * tok.advantage);
      tok.kl = k3(s.logp_new[t], s.logp_ref[t]);
      surr_sum += tok.surrogate;
      kl_sum += tok.kl;
      value_sum += tok.surrogate - config.beta * tok.kl;
      seq.tokens.push_back(tok);
    }
    const double dn = static_cast<double>(n);
    seq.surrogate_mean = surr_sum / dn;
    seq.kl_mean = kl_sum / dn;
    seq.value = value_sum / dn;
    result.sequences.push_back(std::move(seq));
  }

  double obj = 0.0;
  double surr = 0.0;
  double kl = 0.0;
  for (const auto& seq : result.sequences) {
    obj += seq.value;
    surr += seq.surrogate_mean;
    kl += seq.kl_mean;
  }
  const double g = static_cast<double>(result.sequences.size());
  result.objective = obj / g;
  result.surrogate_mean = surr / g;
  result.kl_mean = kl / g;
  return result;
}

}  // namespace grp
