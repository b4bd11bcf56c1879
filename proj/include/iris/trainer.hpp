#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iris/curriculum.hpp"
#include "iris/embedder.hpp"
#include "iris/grpo.hpp"
#include "iris/policy.hpp"
#include "iris/rewards.hpp"
#include "iris/taskgen.hpp"

namespace iris {

// All knobs of one experiment. Learning-rate defaults are desk-scale values
// for the tabular policy; the LLM-scale rates from the reference setup
// (3e-4 vertical, 5e-6 horizontal) do not transfer to a logits table.
struct TrainConfig {
  std::string train_corpus;        // RL-phase corpus (and SFT unless overridden)
  std::string sft_corpus;          // optional separate vertical-phase corpus
  std::string eval_corpus;         // optional; defaults to train_corpus
  std::string anchor_corpus;       // optional high-resource corpus to mix in
  double mix_fraction = 0.0;       // fraction of anchor items when mixing

  int vertical_epochs = 3;
  double vertical_lr = 0.1;
  int sft_batch = 8;

  int horizontal_updates = 400;
  double horizontal_lr = 0.01;
  int batch_problems = 8;          // B problems per update; defines t
  int group_size = kDefaultGroupSize;
  double kl_beta = kDefaultKlBeta;
  double temperature = 1.0;
  int gen_slack = 8;               // rollout cap = gold suffix tokens + slack

  double alpha0 = 0.7;
  double alpha1 = 1.0;
  double warmup_fraction = 0.10;

  int policy_order = 3;
  uint64_t policy_buckets = uint64_t{1} << 20;

  bool disable_cos = false;
  bool disable_cont = false;
  bool disable_int = false;
  bool no_curriculum = false;
  bool h_only = false;
  bool vertical_cumulative = false;

  uint64_t seed = 0;
  std::string out_dir = "runs/iris";

  RewardFlags reward_flags() const { return {!disable_cos, !disable_cont, !disable_int}; }
  CurriculumMode curriculum_mode() const {
    if (h_only) return CurriculumMode::h_only;
    if (no_curriculum) return CurriculumMode::no_curriculum;
    return CurriculumMode::staged;
  }
  void validate() const;

  std::string to_json() const;
  static TrainConfig from_json_text(const std::string& text);
  static TrainConfig from_json_file(const std::string& path);
};

struct EpochLoss {
  std::string stage;
  int epoch = 0;
  double cross_entropy = 0.0;
};

struct VerticalResult {
  std::vector<std::string> checkpoint_paths;  // one per plan stage, in order
  std::vector<EpochLoss> losses;
};

struct MetricsRow {
  int t = 0;
  double mean_total = 0.0;
  double mean_r_final = 0.0;
  double mean_r_cos = 0.0;  // lambda-weighted contribution
  double mean_r_cont = 0.0;
  double mean_r_int = 0.0;
  double kl = 0.0;
};

struct HorizontalResult {
  std::vector<MetricsRow> metrics;
};

struct IrisArtifacts {
  std::string out_dir;
  std::vector<std::string> checkpoints;
  std::string final_checkpoint;
  std::string metrics_csv;
  std::string sft_log_csv;
  std::string config_echo;
};

// Sequential SFT over the vertical plan; writes one checkpoint per stage
// under out_dir and logs per-epoch cross-entropy. With an h_only plan the
// untrained policy is saved as the single "init" checkpoint.
VerticalResult run_vertical(const TrainConfig& config, const Corpus& corpus,
                            Policy& policy, Rng& rng, const std::string& out_dir);

// Reverse-curriculum GRPO phase. Freezes the reference copy of `policy`,
// then performs config.horizontal_updates batched updates with curriculum-
// weighted stage sampling, appending one metrics row per update to
// metrics_csv_path (written incrementally).
HorizontalResult run_horizontal(const TrainConfig& config, const Corpus& corpus,
                                Policy& policy, const Embedder& embedder, Rng& rng,
                                const std::string& metrics_csv_path);

// Full pipeline: corpora load/mix, vocabulary, vertical SFT, horizontal GRPO,
// artifact and config-echo writing.
IrisArtifacts run_iris(const TrainConfig& config);

// Shared helpers (also used by eval and tests).
std::vector<int> full_solution_prompt_ids(const Vocabulary& vocab, const Problem& problem);
Policy::SftExample sft_example(const Vocabulary& vocab, const Problem& problem);
void write_metrics_header(std::ostream& out);
void write_metrics_row(std::ostream& out, const MetricsRow& row);
std::string format_double(double value);

// Resolves the three corpora of a run: {sft, rl, eval}. Applies anchor
// mixing to the RL corpus when configured.
struct RunCorpora {
  Corpus sft;
  Corpus rl;
  Corpus eval;
};
RunCorpora load_run_corpora(const TrainConfig& config);

}  // namespace iris
