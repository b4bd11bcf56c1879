#include "iris/trainer.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "iris/errors.hpp"
#include "iris/staging.hpp"
#include "json.hpp"

namespace iris {

namespace {

namespace fs = std::filesystem;

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::vector<size_t> tier_union_indices(const Corpus& corpus,
                                       const std::vector<Difficulty>& tiers) {
  std::vector<size_t> indices;
  for (Difficulty d : tiers) {
    const auto part = corpus.tier_indices(d);
    indices.insert(indices.end(), part.begin(), part.end());
  }
  return indices;
}

}  // namespace

void TrainConfig::validate() const {
  if (train_corpus.empty()) throw ConfigError("train_corpus is required");
  if (vertical_lr <= 0.0 || horizontal_lr <= 0.0) {
    throw ConfigError("learning rates must be positive");
  }
  if (mix_fraction < 0.0 || mix_fraction > 1.0) {
    throw ConfigError("mix_fraction must lie in [0,1]");
  }
  if (warmup_fraction < 0.0 || warmup_fraction > 1.0) {
    throw ConfigError("warmup_fraction must lie in [0,1]");
  }
  if (group_size < 2) throw ConfigError("group_size must be >= 2");
  if (batch_problems < 1) throw ConfigError("batch_problems must be >= 1");
  if (vertical_epochs < 0 || horizontal_updates < 0) {
    throw ConfigError("epoch and update counts must be non-negative");
  }
  if (!(alpha0 > 0.0) || alpha0 > alpha1) {
    throw ConfigError("alphas must satisfy 0 < alpha0 <= alpha1");
  }
  if (temperature < 0.0) throw ConfigError("temperature must be non-negative");
  if (policy_order < 1) throw ConfigError("policy_order must be >= 1");
}

std::string TrainConfig::to_json() const {
  nlohmann::json j{
      {"train_corpus", train_corpus},
      {"sft_corpus", sft_corpus},
      {"eval_corpus", eval_corpus},
      {"anchor_corpus", anchor_corpus},
      {"mix_fraction", mix_fraction},
      {"vertical_epochs", vertical_epochs},
      {"vertical_lr", vertical_lr},
      {"sft_batch", sft_batch},
      {"horizontal_updates", horizontal_updates},
      {"horizontal_lr", horizontal_lr},
      {"batch_problems", batch_problems},
      {"group_size", group_size},
      {"kl_beta", kl_beta},
      {"temperature", temperature},
      {"gen_slack", gen_slack},
      {"alpha0", alpha0},
      {"alpha1", alpha1},
      {"warmup_fraction", warmup_fraction},
      {"policy_order", policy_order},
      {"policy_buckets", policy_buckets},
      {"disable_cos", disable_cos},
      {"disable_cont", disable_cont},
      {"disable_int", disable_int},
      {"no_curriculum", no_curriculum},
      {"h_only", h_only},
      {"vertical_cumulative", vertical_cumulative},
      {"seed", seed},
      {"out_dir", out_dir},
  };
  return j.dump(2);
}

TrainConfig TrainConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config JSON: ") + e.what());
  }
  TrainConfig cfg;
  const TrainConfig defaults;
  nlohmann::json known = nlohmann::json::parse(defaults.to_json());
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  try {
    read_field(j, "train_corpus", cfg.train_corpus);
    read_field(j, "sft_corpus", cfg.sft_corpus);
    read_field(j, "eval_corpus", cfg.eval_corpus);
    read_field(j, "anchor_corpus", cfg.anchor_corpus);
    read_field(j, "mix_fraction", cfg.mix_fraction);
    read_field(j, "vertical_epochs", cfg.vertical_epochs);
    read_field(j, "vertical_lr", cfg.vertical_lr);
    read_field(j, "sft_batch", cfg.sft_batch);
    read_field(j, "horizontal_updates", cfg.horizontal_updates);
    read_field(j, "horizontal_lr", cfg.horizontal_lr);
    read_field(j, "batch_problems", cfg.batch_problems);
    read_field(j, "group_size", cfg.group_size);
    read_field(j, "kl_beta", cfg.kl_beta);
    read_field(j, "temperature", cfg.temperature);
    read_field(j, "gen_slack", cfg.gen_slack);
    read_field(j, "alpha0", cfg.alpha0);
    read_field(j, "alpha1", cfg.alpha1);
    read_field(j, "warmup_fraction", cfg.warmup_fraction);
    read_field(j, "policy_order", cfg.policy_order);
    read_field(j, "policy_buckets", cfg.policy_buckets);
    read_field(j, "disable_cos", cfg.disable_cos);
    read_field(j, "disable_cont", cfg.disable_cont);
    read_field(j, "disable_int", cfg.disable_int);
    read_field(j, "no_curriculum", cfg.no_curriculum);
    read_field(j, "h_only", cfg.h_only);
    read_field(j, "vertical_cumulative", cfg.vertical_cumulative);
    read_field(j, "seed", cfg.seed);
    read_field(j, "out_dir", cfg.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return cfg;
}

TrainConfig TrainConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_text(text);
}

std::vector<int> full_solution_prompt_ids(const Vocabulary& vocab, const Problem& problem) {
  const StageInstance hardest = stage_instance(problem, problem.n_steps() - 2);
  return encode_prompt(vocab, render_prompt(hardest));
}

Policy::SftExample sft_example(const Vocabulary& vocab, const Problem& problem) {
  Policy::SftExample ex;
  ex.prompt = full_solution_prompt_ids(vocab, problem);
  std::string solution;
  for (size_t i = 0; i < problem.steps.size(); ++i) {
    if (i > 0) solution.push_back('\n');
    solution += problem.steps[i];
  }
  ex.target = encode_continuation(vocab, solution);
  return ex;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

void write_metrics_header(std::ostream& out) {
  out << "t,mean_total,mean_r_final,mean_r_cos,mean_r_cont,mean_r_int,kl\n";
}

void write_metrics_row(std::ostream& out, const MetricsRow& row) {
  out << row.t << ',' << format_double(row.mean_total) << ','
      << format_double(row.mean_r_final) << ',' << format_double(row.mean_r_cos) << ','
      << format_double(row.mean_r_cont) << ',' << format_double(row.mean_r_int) << ','
      << format_double(row.kl) << '\n';
}

VerticalResult run_vertical(const TrainConfig& config, const Corpus& corpus,
                            Policy& policy, Rng& rng, const std::string& out_dir) {
  VerticalResult result;
  fs::create_directories(out_dir);
  const VerticalPlan plan = vertical_plan(corpus, config.vertical_epochs,
                                          config.curriculum_mode(),
                                          config.vertical_cumulative);
  if (plan.stages.empty()) {
    const std::string path = (fs::path(out_dir) / "checkpoint_init.irpc").string();
    policy.save(path);
    result.checkpoint_paths.push_back(path);
    return result;
  }

  for (const VerticalStage& stage : plan.stages) {
    std::vector<size_t> indices = tier_union_indices(corpus, stage.train_tiers);
    if (indices.empty()) {
      throw DataError("vertical stage '" + stage.label + "' has no training problems");
    }
    for (int epoch = 0; epoch < plan.epochs; ++epoch) {
      rng.shuffle(indices);
      double ce_sum = 0.0;
      int batches = 0;
      for (size_t begin = 0; begin < indices.size();
           begin += static_cast<size_t>(config.sft_batch)) {
        const size_t end =
            std::min(indices.size(), begin + static_cast<size_t>(config.sft_batch));
        std::vector<Policy::SftExample> batch;
        batch.reserve(end - begin);
        for (size_t i = begin; i < end; ++i) {
          batch.push_back(sft_example(policy.vocab(), corpus.problems[indices[i]]));
        }
        ce_sum += policy.sft_step(batch, config.vertical_lr);
        ++batches;
      }
      result.losses.push_back({stage.label, epoch, ce_sum / std::max(batches, 1)});
    }
    const std::string path =
        (fs::path(out_dir) / ("checkpoint_" + stage.label + ".irpc")).string();
    policy.save(path);
    result.checkpoint_paths.push_back(path);
  }
  return result;
}

HorizontalResult run_horizontal(const TrainConfig& config, const Corpus& corpus,
                                Policy& policy, const Embedder& embedder, Rng& rng,
                                const std::string& metrics_csv_path) {
  HorizontalResult result;
  if (corpus.size() == 0) throw DataError("horizontal phase: empty corpus");

  const Policy reference = policy.clone_frozen();
  CurriculumState state;
  state.alpha0 = config.alpha0;
  state.alpha1 = config.alpha1;
  state.warmup_updates = warmup_length(config.horizontal_updates, config.warmup_fraction);
  const RewardFlags flags = config.reward_flags();
  const bool uniform_stages = config.no_curriculum;

  std::ofstream metrics(metrics_csv_path, std::ios::binary);
  if (!metrics) throw DataError("cannot write metrics file: " + metrics_csv_path);
  write_metrics_header(metrics);

  for (int t = 0; t < config.horizontal_updates; ++t) {
    std::vector<RolloutGroup> groups;
    groups.reserve(static_cast<size_t>(config.batch_problems));
    for (int b = 0; b < config.batch_problems; ++b) {
      const Problem& problem =
          corpus.problems[static_cast<size_t>(rng.next_below(corpus.size()))];
      const int stage_max = problem.n_steps() - 2;
      const int k = uniform_stages ? rng.next_int(0, stage_max)
                                   : sample_stage(problem.n_steps(), t, state, rng);
      const StageInstance instance = stage_instance(problem, k);
      const std::vector<int> prompt_ids =
          encode_prompt(policy.vocab(), render_prompt(instance));
      const int max_len =
          static_cast<int>(encode_continuation(policy.vocab(), suffix_text(instance)).size()) +
          config.gen_slack;
      RolloutGroup group = sample_group(policy, instance, prompt_ids, config.group_size,
                                        max_len, config.temperature, rng);
      score_group(group, policy.vocab(), problem.answer, embedder, flags);
      groups.push_back(std::move(group));
    }

    const GrpoLoss loss =
        grpo_update(policy, reference, groups, config.horizontal_lr, config.kl_beta);

    MetricsRow row;
    row.t = t;
    size_t n_rollouts = 0;
    for (const RolloutGroup& group : groups) {
      for (const RewardBreakdown& r : group.rewards) {
        row.mean_total += r.total;
        row.mean_r_final += r.r_final;
        row.mean_r_cos += r.lambda_k * r.r_cos;
        row.mean_r_cont += r.r_cont;
        row.mean_r_int += r.r_int;
        ++n_rollouts;
      }
    }
    const double inv = 1.0 / static_cast<double>(n_rollouts);
    row.mean_total *= inv;
    row.mean_r_final *= inv;
    row.mean_r_cos *= inv;
    row.mean_r_cont *= inv;
    row.mean_r_int *= inv;
    row.kl = loss.kl_term;
    write_metrics_row(metrics, row);
    metrics.flush();  // interrupted runs keep partial logs
    result.metrics.push_back(row);
  }
  return result;
}

RunCorpora load_run_corpora(const TrainConfig& config) {
  std::vector<std::string> warnings;
  RunCorpora out;
  out.rl = load_corpus(config.train_corpus, Split::train, &warnings);
  if (!config.anchor_corpus.empty() && config.mix_fraction > 0.0) {
    const Corpus anchor = load_corpus(config.anchor_corpus, Split::train, &warnings);
    out.rl = mix_corpora(anchor, out.rl, config.mix_fraction, config.seed ^ 0x5eedULL);
  }
  out.sft = config.sft_corpus.empty() ? out.rl
                                      : load_corpus(config.sft_corpus, Split::train, &warnings);
  out.eval = config.eval_corpus.empty()
                 ? out.rl
                 : load_corpus(config.eval_corpus, Split::test, &warnings);
  if (!config.eval_corpus.empty()) {
    check_no_leakage(out.rl, out.eval);
    check_no_leakage(out.sft, out.eval);
  }
  for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';
  return out;
}

IrisArtifacts run_iris(const TrainConfig& config) {
  config.validate();
  const RunCorpora corpora = load_run_corpora(config);

  fs::create_directories(config.out_dir);
  IrisArtifacts artifacts;
  artifacts.out_dir = config.out_dir;
  artifacts.config_echo = (fs::path(config.out_dir) / "config.json").string();
  {
    std::ofstream echo(artifacts.config_echo, std::ios::binary);
    echo << config.to_json() << '\n';
  }

  auto vocab = Vocabulary::build({&corpora.sft, &corpora.rl, &corpora.eval});
  Policy policy(vocab, {config.policy_order, config.policy_buckets});
  Rng master(config.seed);
  Rng rng_vertical = master.split(1);
  Rng rng_horizontal = master.split(2);

  const VerticalResult vertical =
      run_vertical(config, corpora.sft, policy, rng_vertical, config.out_dir);
  artifacts.checkpoints = vertical.checkpoint_paths;
  artifacts.sft_log_csv = (fs::path(config.out_dir) / "sft_log.csv").string();
  {
    std::ofstream log(artifacts.sft_log_csv, std::ios::binary);
    log << "stage,epoch,cross_entropy\n";
    for (const EpochLoss& loss : vertical.losses) {
      log << loss.stage << ',' << loss.epoch << ',' << format_double(loss.cross_entropy)
          << '\n';
    }
  }

  artifacts.metrics_csv = (fs::path(config.out_dir) / "metrics.csv").string();
  const TrigramEmbedder embedder;
  run_horizontal(config, corpora.rl, policy, embedder, rng_horizontal,
                 artifacts.metrics_csv);

  artifacts.final_checkpoint = (fs::path(config.out_dir) / "checkpoint_final.irpc").string();
  policy.save(artifacts.final_checkpoint);
  return artifacts;
}

}  // namespace iris
