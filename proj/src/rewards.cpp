#include "iris/rewards.hpp"

#include "iris/corpus.hpp"
#include "iris/errors.hpp"

namespace iris {

double correctness_reward(const std::optional<CanonicalNumber>& generated,
                          const CanonicalNumber& gold) {
  return (generated && *generated == gold) ? kCorrectReward : 0.0;
}

double lambda_weight(int stage, int stage_max) {
  if (stage < 0 || stage > stage_max) {
    throw DataError("lambda_weight: stage " + std::to_string(stage) +
                    " outside [0," + std::to_string(stage_max) + "]");
  }
  if (stage_max == 0) return 0.0;
  if (stage == stage_max) return 0.0;
  if (stage == 0) return kLambdaMax;
  return kLambdaMax * (1.0 - static_cast<double>(stage) / static_cast<double>(stage_max));
}

double cosine_alignment(std::string_view generated_suffix, std::string_view gold_suffix,
                        const Embedder& embedder) {
  return cosine_clamped(embedder.embed(generated_suffix), embedder.embed(gold_suffix));
}

double continuation_reward(int prefix_len, std::string_view generated_text) {
  const std::vector<std::string> steps = parse_steps(generated_text);
  if (steps.empty()) return 0.0;
  const std::optional<int> label = step_label(steps.front());
  if (!label) return 0.0;
  if (*label == prefix_len + 1) return kContinueReward;
  if (*label == 1 && prefix_len >= 1) return kRestartPenalty;
  return 0.0;
}

double integer_reward(const std::optional<CanonicalNumber>& final_token) {
  return (final_token && final_token->is_integer()) ? kIntegerReward : 0.0;
}

std::optional<CanonicalNumber> generation_final_answer(std::string_view generated_text) {
  const std::vector<std::string> steps = parse_steps(generated_text);
  if (steps.empty()) return std::nullopt;
  return extract_final_answer(steps.back());
}

RewardBreakdown composite_reward(const StageInstance& instance, const CanonicalNumber& gold,
                                 std::string_view generated_text, const Embedder& embedder,
                                 const RewardFlags& flags) {
  RewardBreakdown out;
  const auto answer = generation_final_answer(generated_text);
  out.r_final = correctness_reward(answer, gold);
  out.lambda_k = lambda_weight(instance.stage, instance.stage_max);
  if (flags.use_cos) {
    out.r_cos = cosine_alignment(generated_text, suffix_text(instance), embedder);
  }
  if (flags.use_cont) {
    out.r_cont = continuation_reward(instance.prefix_len, generated_text);
  }
  if (flags.use_int) {
    out.r_int = integer_reward(answer);
  }
  out.total = out.r_final + out.lambda_k * out.r_cos + out.r_cont + out.r_int;
  return out;
}

}  // namespace iris
