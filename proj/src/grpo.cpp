#include "iris/grpo.hpp"

#include <cmath>

#include "iris/errors.hpp"

namespace iris {

namespace {

constexpr double kZeroVarianceEps = 1e-12;

bool zero_variance(const std::vector<double>& totals) {
  double lo = totals[0], hi = totals[0];
  for (double t : totals) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  return hi - lo <= kZeroVarianceEps;
}

}  // namespace

RolloutGroup sample_group(const Policy& policy, const StageInstance& instance,
                          const std::vector<int>& prompt_ids, int group_size, int max_len,
                          double temperature, Rng& rng) {
  if (group_size < 2) throw ConfigError("group size must be >= 2");
  if (max_len < 1) throw ConfigError("max generation length must be >= 1");
  RolloutGroup group;
  group.instance = instance;
  group.prompt_ids = prompt_ids;
  group.rollouts.reserve(static_cast<size_t>(group_size));
  for (int i = 0; i < group_size; ++i) {
    Rollout rollout;
    rollout.ids = policy.sample(prompt_ids, max_len, temperature, rng);
    rollout.log_prob_at_sample = policy.log_prob(prompt_ids, rollout.ids).total;
    group.rollouts.push_back(std::move(rollout));
  }
  return group;
}

std::vector<double> compute_advantages(const std::vector<double>& rewards) {
  if (rewards.size() < 2) throw ConfigError("advantages need a group of >= 2");
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  std::vector<double> advantages(rewards.size());
  for (size_t i = 0; i < rewards.size(); ++i) advantages[i] = rewards[i] - mean;
  return advantages;
}

void score_group(RolloutGroup& group, const Vocabulary& vocab, const CanonicalNumber& gold,
                 const Embedder& embedder, const RewardFlags& flags) {
  group.rewards.clear();
  group.rewards.reserve(group.rollouts.size());
  std::vector<double> totals;
  totals.reserve(group.rollouts.size());
  for (const Rollout& rollout : group.rollouts) {
    const std::string text = vocab.detokenize(rollout.ids);
    group.rewards.push_back(composite_reward(group.instance, gold, text, embedder, flags));
    totals.push_back(group.rewards.back().total);
  }
  group.advantages = compute_advantages(totals);
}

double kl_to_reference(const Policy& policy, const Policy& reference,
                       const std::vector<int>& prompt, const std::vector<int>& continuation) {
  if (continuation.empty()) return 0.0;
  const std::vector<uint64_t> keys = policy.continuation_keys(prompt, continuation);
  const std::vector<uint64_t> ref_keys = reference.continuation_keys(prompt, continuation);
  double sum = 0.0;
  for (size_t i = 0; i < keys.size(); ++i) {
    const std::vector<double> lp = policy.log_probs_at(keys[i]);
    const std::vector<double> lq = reference.log_probs_at(ref_keys[i]);
    double kl = 0.0;
    for (size_t j = 0; j < lp.size(); ++j) {
      kl += std::exp(lp[j]) * (lp[j] - lq[j]);
    }
    sum += std::max(kl, 0.0);  // guards tiny negative rounding residue
  }
  return sum / static_cast<double>(keys.size());
}

GrpoLoss grpo_loss_and_grad(const Policy& policy, const Policy& reference,
                            const std::vector<RolloutGroup>& groups, double beta,
                            std::unordered_map<uint64_t, std::vector<double>>* grad_out) {
  if (groups.empty()) throw ConfigError("grpo: no rollout groups");
  const int v = policy.vocab().size();
  GrpoLoss loss;
  const double inv_groups = 1.0 / static_cast<double>(groups.size());

  for (const RolloutGroup& group : groups) {
    if (group.rollouts.empty() || group.rollouts.size() != group.advantages.size()) {
      throw ConfigError("grpo: group not scored");
    }
    const double inv_g = 1.0 / static_cast<double>(group.rollouts.size());

    std::vector<double> totals;
    totals.reserve(group.rewards.size());
    for (const RewardBreakdown& r : group.rewards) totals.push_back(r.total);
    const bool skip_policy_term = zero_variance(totals);

    for (size_t i = 0; i < group.rollouts.size(); ++i) {
      const Rollout& rollout = group.rollouts[i];
      if (rollout.ids.empty()) continue;
      const double advantage = group.advantages[i];
      const std::vector<uint64_t> keys =
          policy.continuation_keys(group.prompt_ids, rollout.ids);
      const std::vector<uint64_t> ref_keys =
          reference.continuation_keys(group.prompt_ids, rollout.ids);
      const double inv_len = 1.0 / static_cast<double>(rollout.ids.size());

      double rollout_logprob = 0.0;
      double rollout_kl = 0.0;
      for (size_t pos = 0; pos < rollout.ids.size(); ++pos) {
        const std::vector<double> lp = policy.log_probs_at(keys[pos]);
        const std::vector<double> lq = reference.log_probs_at(ref_keys[pos]);
        const int target = rollout.ids[pos];
        rollout_logprob += lp[static_cast<size_t>(target)];

        double kl = 0.0;
        for (int j = 0; j < v; ++j) {
          kl += std::exp(lp[static_cast<size_t>(j)]) *
                (lp[static_cast<size_t>(j)] - lq[static_cast<size_t>(j)]);
        }
        kl = std::max(kl, 0.0);
        rollout_kl += kl;

        if (grad_out != nullptr) {
          auto [it, inserted] =
              grad_out->try_emplace(keys[pos], static_cast<size_t>(v), 0.0);
          std::vector<double>& g = it->second;
          // Policy-gradient piece: d(-A log pi)/dz_j = A (p_j - onehot_j).
          const double pg_scale =
              skip_policy_term ? 0.0 : inv_groups * inv_g * advantage;
          // KL piece: dKL/dz_j = p_j (log p_j - log q_j - KL).
          const double kl_scale = beta * inv_groups * inv_g * inv_len;
          for (int j = 0; j < v; ++j) {
            const double p = std::exp(lp[static_cast<size_t>(j)]);
            double dj = 0.0;
            if (!skip_policy_term) {
              dj += pg_scale * (p - (j == target ? 1.0 : 0.0));
            }
            dj += kl_scale * p *
                  (lp[static_cast<size_t>(j)] - lq[static_cast<size_t>(j)] - kl);
            g[static_cast<size_t>(j)] += dj;
          }
        }
      }
      if (!skip_policy_term) {
        loss.policy_term -= inv_groups * inv_g * advantage * rollout_logprob;
      }
      loss.kl_term += inv_groups * inv_g * rollout_kl * inv_len;
    }
  }
  return loss;
}

GrpoLoss grpo_update(Policy& policy, const Policy& reference,
                     const std::vector<RolloutGroup>& groups, double learning_rate,
                     double beta) {
  std::unordered_map<uint64_t, std::vector<double>> grad;
  const GrpoLoss loss = grpo_loss_and_grad(policy, reference, groups, beta, &grad);
  if (learning_rate != 0.0) policy.apply_gradient(grad, -learning_rate);
  return loss;
}

}  // namespace iris
