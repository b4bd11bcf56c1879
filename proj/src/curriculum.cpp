#include "iris/curriculum.hpp"

#include <cmath>

#include "iris/errors.hpp"

namespace iris {

void CurriculumState::validate() const {
  if (!(alpha0 > 0.0) || alpha0 > alpha1) {
    throw ConfigError("curriculum requires 0 < alpha0 <= alpha1");
  }
  if (warmup_updates < 1) throw ConfigError("warm-up length must be >= 1");
}

double alpha_at(int t, const CurriculumState& state) {
  state.validate();
  if (t <= 0) return state.alpha0;
  if (t >= state.warmup_updates) return state.alpha1;
  const double progress = static_cast<double>(t) / static_cast<double>(state.warmup_updates);
  return state.alpha0 + (state.alpha1 - state.alpha0) * progress;
}

std::vector<double> stage_weights(int t, const CurriculumState& state, int stage_max) {
  if (stage_max < 0) throw ConfigError("stage_max must be >= 0");
  const double alpha = alpha_at(t, state);
  std::vector<double> weights(static_cast<size_t>(stage_max) + 1);
  double w = 1.0;
  double sum = 0.0;
  for (int k = 0; k <= stage_max; ++k) {
    weights[static_cast<size_t>(k)] = w;
    sum += w;
    w *= alpha;
  }
  for (double& x : weights) x /= sum;
  return weights;
}

int sample_stage(int n_steps, int t, const CurriculumState& state, Rng& rng) {
  if (n_steps < 2) throw DataError("sample_stage: problem needs n >= 2");
  const std::vector<double> weights = stage_weights(t, state, n_steps - 2);
  return static_cast<int>(rng.next_weighted(weights));
}

int warmup_length(int planned_updates, double fraction) {
  const int t = static_cast<int>(
      std::ceil(fraction * static_cast<double>(std::max(planned_updates, 0))));
  return std::max(t, 1);
}

VerticalPlan vertical_plan(const Corpus& corpus, int epochs, CurriculumMode mode,
                           bool cumulative) {
  VerticalPlan plan;
  plan.epochs = epochs;
  if (mode == CurriculumMode::h_only) return plan;
  if (mode == CurriculumMode::no_curriculum) {
    plan.stages.push_back(
        {"all", {Difficulty::easy, Difficulty::medium, Difficulty::hard}});
    return plan;
  }
  for (Difficulty d : {Difficulty::easy, Difficulty::medium, Difficulty::hard}) {
    if (!corpus.has_tier(d)) {
      throw DataError(std::string("vertical plan: corpus lacks the ") + to_string(d) +
                      " tier");
    }
  }
  plan.stages.push_back({"easy", {Difficulty::easy}});
  if (cumulative) {
    plan.stages.push_back({"easy+med", {Difficulty::easy, Difficulty::medium}});
    plan.stages.push_back(
        {"easy+med+hard", {Difficulty::easy, Difficulty::medium, Difficulty::hard}});
  } else {
    plan.stages.push_back({"easy+med", {Difficulty::medium}});
    plan.stages.push_back({"easy+med+hard", {Difficulty::hard}});
  }
  return plan;
}

}  // namespace iris
