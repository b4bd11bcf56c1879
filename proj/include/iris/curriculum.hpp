#pragma once

#include <string>
#include <vector>

#include "iris/corpus.hpp"
#include "iris/rng.hpp"

namespace iris {

// Warm-up schedule for horizontal stage sampling: the sampling base alpha
// rises linearly from alpha0 to alpha1 over the first warmup_updates updates,
// after which stage sampling is uniform (for the default alpha1 = 1).
struct CurriculumState {
  int warmup_updates = 1;  // T, >= 1 (10% of planned updates by default)
  double alpha0 = 0.7;
  double alpha1 = 1.0;

  void validate() const;
};

double alpha_at(int t, const CurriculumState& state);

// Normalized weights alpha_t^k over stages k in {0..stage_max}.
std::vector<double> stage_weights(int t, const CurriculumState& state, int stage_max);

// Draws a stage for a problem with n_steps steps (stage_max = n-2).
int sample_stage(int n_steps, int t, const CurriculumState& state, Rng& rng);

// Warm-up length from the planned update count: ceil(fraction * updates),
// at least 1.
int warmup_length(int planned_updates, double fraction = 0.10);

enum class CurriculumMode {
  staged,         // easy -> easy+med -> easy+med+hard SFT chain
  no_curriculum,  // single SFT stage over all tiers mixed; uniform RL stages
  h_only,         // no SFT at all
};

struct VerticalStage {
  std::string label;                   // checkpoint chain id, e.g. "easy+med"
  std::vector<Difficulty> train_tiers; // tiers actually trained at this stage
};

struct VerticalPlan {
  std::vector<VerticalStage> stages;  // empty for h_only
  int epochs = 3;
};

// Builds the staged plan over the corpus tiers. By default each stage trains
// on the newly added tier while initializing from the previous checkpoint;
// `cumulative` switches to training on the union instead. Throws DataError
// when a staged plan lacks one of the three tiers.
VerticalPlan vertical_plan(const Corpus& corpus, int epochs,
                           CurriculumMode mode = CurriculumMode::staged,
                           bool cumulative = false);

}  // namespace iris
