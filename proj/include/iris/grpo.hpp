#pragma once

#include <unordered_map>
#include <vector>

#include "iris/policy.hpp"
#include "iris/rewards.hpp"
#include "iris/staging.hpp"

namespace iris {

inline constexpr int kDefaultGroupSize = 4;
inline constexpr double kDefaultKlBeta = 0.01;

struct Rollout {
  std::vector<int> ids;            // sampled continuation, may end with <END>
  double log_prob_at_sample = 0.0; // recorded when the rollout was drawn
};

// G rollouts for one stage instance with their rewards and group-relative
// advantages. Advantages always sum to zero by construction.
struct RolloutGroup {
  StageInstance instance;
  std::vector<int> prompt_ids;
  std::vector<Rollout> rollouts;
  std::vector<RewardBreakdown> rewards;
  std::vector<double> advantages;

  size_t size() const { return rollouts.size(); }
};

// Draws G independent rollouts from the prompt (rewards and advantages are
// left for the caller to fill).
RolloutGroup sample_group(const Policy& policy, const StageInstance& instance,
                          const std::vector<int>& prompt_ids, int group_size, int max_len,
                          double temperature, Rng& rng);

// advantage_i = reward_i - group mean.
std::vector<double> compute_advantages(const std::vector<double>& rewards);

// Fills rewards and advantages of a sampled group.
void score_group(RolloutGroup& group, const Vocabulary& vocab, const CanonicalNumber& gold,
                 const Embedder& embedder, const RewardFlags& flags);

// Mean over continuation positions of the exact full-vocabulary
// KL(policy(.|ctx) || reference(.|ctx)). Non-negative; zero for identical
// parameters.
double kl_to_reference(const Policy& policy, const Policy& reference,
                       const std::vector<int>& prompt, const std::vector<int>& continuation);

struct GrpoLoss {
  double policy_term = 0.0;
  double kl_term = 0.0;  // unscaled mean KL; the objective weighs it by beta
  double total(double beta) const { return policy_term + beta * kl_term; }
};

// Objective value and its analytic gradient w.r.t. the policy logits, with
// log-probs recomputed under the current parameters. Groups whose rewards
// have zero variance contribute no policy-gradient but still count toward
// the KL term.
GrpoLoss grpo_loss_and_grad(const Policy& policy, const Policy& reference,
                            const std::vector<RolloutGroup>& groups, double beta,
                            std::unordered_map<uint64_t, std::vector<double>>* grad_out);

// One descending gradient step on the GRPO objective; returns both loss
// components evaluated before the step.
GrpoLoss grpo_update(Policy& policy, const Policy& reference,
                     const std::vector<RolloutGroup>& groups, double learning_rate,
                     double beta);

}  // namespace iris
