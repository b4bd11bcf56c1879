#pragma once

#include <optional>
#include <string_view>

#include "iris/embedder.hpp"
#include "iris/numeric.hpp"
#include "iris/staging.hpp"

namespace iris {

inline constexpr double kLambdaMax = 2.5;
inline constexpr double kCorrectReward = 2.0;
inline constexpr double kContinueReward = 1.0;
inline constexpr double kRestartPenalty = -0.5;
inline constexpr double kIntegerReward = 0.5;

// Ablation switches for the non-correctness components. Disabling everything
// but correctness reproduces the correctness-only configuration.
struct RewardFlags {
  bool use_cos = true;
  bool use_cont = true;
  bool use_int = true;

  static RewardFlags correctness_only() { return {false, false, false}; }
};

struct RewardBreakdown {
  double r_final = 0.0;   // {0, +2}
  double r_cos = 0.0;     // [0, 1], unweighted
  double lambda_k = 0.0;  // stage-decayed alignment weight, >= 0
  double r_cont = 0.0;    // {-0.5, 0, +1}
  double r_int = 0.0;     // {0, +0.5}
  double total = 0.0;     // r_final + lambda_k * r_cos + r_cont + r_int
};

// +2 iff the canonical forms match exactly, 0 otherwise (absent counts as 0).
double correctness_reward(const std::optional<CanonicalNumber>& generated,
                          const CanonicalNumber& gold);

// Linear decay lambda_max * (1 - k/k_max). The degenerate single-stage case
// (k_max = 0) has weight 0: the only stage is also the hardest one.
double lambda_weight(int stage, int stage_max);

// Cosine of the two suffix embeddings, clamped to [0,1].
double cosine_alignment(std::string_view generated_suffix, std::string_view gold_suffix,
                        const Embedder& embedder);

// +1 when the first generated step continues the numbering (label m+1), -0.5
// when it restarts at 1 despite a non-empty prefix, 0 otherwise.
double continuation_reward(int prefix_len, std::string_view generated_text);

// +0.5 iff the token is an optionally-minus-signed Arabic-digit integer.
double integer_reward(const std::optional<CanonicalNumber>& final_token);

// Final answer of a generation: extract_final_answer over its last parsed
// step; generations with no parsed steps have no answer.
std::optional<CanonicalNumber> generation_final_answer(std::string_view generated_text);

// Full composite reward for one rollout against one stage instance.
RewardBreakdown composite_reward(const StageInstance& instance, const CanonicalNumber& gold,
                                 std::string_view generated_text, const Embedder& embedder,
                                 const RewardFlags& flags = {});

}  // namespace iris
