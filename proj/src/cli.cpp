#include "iris/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "iris/errors.hpp"
#include "iris/eval.hpp"
#include "iris/taskgen.hpp"
#include "iris/trainer.hpp"

namespace iris {

namespace {

namespace fs = std::filesystem;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::vector<uint64_t> parse_seed_list(const std::string& text) {
  std::vector<uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

// The config file named by --config (or $IRIS_CONFIG) seeds the defaults;
// explicit flags then override field by field.
TrainConfig base_config(const std::vector<std::string>& args) {
  std::string path;
  if (const char* env = std::getenv("IRIS_CONFIG")) path = env;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  return path.empty() ? TrainConfig{} : TrainConfig::from_json_file(path);
}

// Registers every TrainConfig field as a flag so any config value can be
// overridden from the command line.
void add_train_options(CLI::App* cmd, TrainConfig& cfg, std::string& config_path,
                       bool& print_config) {
  cmd->add_option("--config", config_path, "JSON config file (or $IRIS_CONFIG)");
  cmd->add_flag("--print-config", print_config, "print the effective config and exit");
  cmd->add_option("--corpus", cfg.train_corpus, "training corpus (jsonl)")
      ->capture_default_str();
  cmd->add_option("--sft-corpus", cfg.sft_corpus, "separate corpus for the SFT phase")
      ->capture_default_str();
  cmd->add_option("--eval-corpus", cfg.eval_corpus, "held-out evaluation corpus")
      ->capture_default_str();
  cmd->add_option("--anchor-corpus", cfg.anchor_corpus,
                  "high-resource corpus mixed into training")
      ->capture_default_str();
  cmd->add_option("--mix-fraction", cfg.mix_fraction, "anchor fraction in [0,1]")
      ->capture_default_str();
  cmd->add_option("--vertical-epochs", cfg.vertical_epochs, "SFT epochs per stage")
      ->capture_default_str();
  cmd->add_option("--vertical-lr", cfg.vertical_lr, "SFT learning rate")
      ->capture_default_str();
  cmd->add_option("--sft-batch", cfg.sft_batch, "SFT batch size")->capture_default_str();
  cmd->add_option("--updates", cfg.horizontal_updates, "GRPO updates")
      ->capture_default_str();
  cmd->add_option("--horizontal-lr", cfg.horizontal_lr, "GRPO learning rate")
      ->capture_default_str();
  cmd->add_option("--batch-problems", cfg.batch_problems, "problems per update (B)")
      ->capture_default_str();
  cmd->add_option("--group-size", cfg.group_size, "rollouts per prompt (G=4)")
      ->capture_default_str();
  cmd->add_option("--kl-beta", cfg.kl_beta, "KL coefficient (beta=0.01)")
      ->capture_default_str();
  cmd->add_option("--temperature", cfg.temperature, "rollout sampling temperature")
      ->capture_default_str();
  cmd->add_option("--gen-slack", cfg.gen_slack, "extra rollout tokens beyond gold length")
      ->capture_default_str();
  cmd->add_option("--alpha0", cfg.alpha0, "stage-sampling base at t=0 (0.7)")
      ->capture_default_str();
  cmd->add_option("--alpha1", cfg.alpha1, "stage-sampling base after warm-up (1.0)")
      ->capture_default_str();
  cmd->add_option("--warmup-fraction", cfg.warmup_fraction,
                  "warm-up share of updates (0.10)")
      ->capture_default_str();
  cmd->add_option("--order", cfg.policy_order, "policy context order")
      ->capture_default_str();
  cmd->add_option("--buckets", cfg.policy_buckets, "policy hash bucket count")
      ->capture_default_str();
  cmd->add_flag("--disable-cos", cfg.disable_cos, "ablate the cosine alignment reward");
  cmd->add_flag("--disable-cont", cfg.disable_cont, "ablate the continuation reward");
  cmd->add_flag("--disable-int", cfg.disable_int, "ablate the integer reward");
  cmd->add_flag("--no-curriculum", cfg.no_curriculum,
                "single mixed SFT stage and uniform RL stage sampling");
  cmd->add_flag("--h-only", cfg.h_only, "skip the vertical SFT phase");
  cmd->add_flag("--cumulative", cfg.vertical_cumulative,
                "train each vertical stage on the tier union");
  cmd->add_option("--seed", cfg.seed, "master RNG seed")->capture_default_str();
  cmd->add_option("--out-dir", cfg.out_dir, "artifact directory")->capture_default_str();
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"IRIS trainer: two-axis curriculum RL on synthetic step-wise math"};
  app.require_subcommand(1);

  // gen-data
  auto* gen = app.add_subcommand("gen-data", "generate a synthetic corpus");
  struct {
    int easy = 0, medium = 0, hard = 0;
    uint64_t seed = 0;
    std::string language = "L0";
    std::string out;
    int inc_lo = 11, inc_hi = 19;
  } gen_opts;
  gen->add_option("--easy", gen_opts.easy, "easy-tier problem count")->capture_default_str();
  gen->add_option("--medium", gen_opts.medium, "medium-tier problem count")
      ->capture_default_str();
  gen->add_option("--hard", gen_opts.hard, "hard-tier problem count")->capture_default_str();
  gen->add_option("--seed", gen_opts.seed, "generator seed")->capture_default_str();
  gen->add_option("--language", gen_opts.language, "language tag (L0/L1/L2)")
      ->capture_default_str();
  gen->add_option("--out", gen_opts.out, "output corpus path")->required();
  gen->add_option("--increment-lo", gen_opts.inc_lo, "smallest per-step increment")
      ->capture_default_str();
  gen->add_option("--increment-hi", gen_opts.inc_hi, "largest per-step increment")
      ->capture_default_str();

  // training-style subcommands share the full option set
  TrainConfig cfg = base_config(args);
  std::string config_path;
  bool print_config = false;
  auto* train = app.add_subcommand("train", "full IRIS pipeline (vertical + horizontal)");
  add_train_options(train, cfg, config_path, print_config);
  auto* sft = app.add_subcommand("sft", "vertical SFT phase only");
  add_train_options(sft, cfg, config_path, print_config);
  auto* rl = app.add_subcommand("rl", "horizontal GRPO phase from a checkpoint");
  std::string init_checkpoint;
  add_train_options(rl, cfg, config_path, print_config);
  rl->add_option("--init-checkpoint", init_checkpoint, "policy checkpoint to start from")
      ->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "pass@1 of a checkpoint on a corpus");
  struct {
    std::string checkpoint;
    std::string corpus;
    std::string tier;
    std::string out;
    double temperature = 0.0;
  } eval_opts;
  eval_cmd->add_option("--checkpoint", eval_opts.checkpoint, "policy checkpoint")
      ->required();
  eval_cmd->add_option("--corpus", eval_opts.corpus, "evaluation corpus")->required();
  eval_cmd->add_option("--tier", eval_opts.tier, "restrict to one tier");
  eval_cmd->add_option("--temperature", eval_opts.temperature,
                       "sampling temperature (0 = greedy)")
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_opts.out, "write the report CSV here");

  // sweep / ablate
  auto* sweep = app.add_subcommand("sweep", "mix-ratio sweep (full IRIS per fraction)");
  std::string fractions_text = "0,0.2,0.5";
  std::string seeds_text = "1";
  add_train_options(sweep, cfg, config_path, print_config);
  sweep->add_option("--fractions", fractions_text, "comma-separated anchor fractions")
      ->capture_default_str();
  sweep->add_option("--seeds", seeds_text, "comma-separated seeds")->capture_default_str();
  auto* ablate = app.add_subcommand("ablate", "curriculum/reward ablation matrix");
  add_train_options(ablate, cfg, config_path, print_config);
  ablate->add_option("--seeds", seeds_text, "comma-separated seeds")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (gen->parsed()) {
    GenConfig gen_cfg;
    gen_cfg.count_per_tier = {{Difficulty::easy, gen_opts.easy},
                              {Difficulty::medium, gen_opts.medium},
                              {Difficulty::hard, gen_opts.hard}};
    gen_cfg.seed = gen_opts.seed;
    gen_cfg.increment_lo = gen_opts.inc_lo;
    gen_cfg.increment_hi = gen_opts.inc_hi;
    const Corpus corpus = generate_corpus(gen_cfg, gen_opts.language);
    save_corpus(corpus, gen_opts.out);
    std::cout << "gen-data: wrote " << corpus.size() << " problems (" << gen_opts.language
              << ") to " << gen_opts.out << '\n';
    return 0;
  }

  if (print_config) {
    std::cout << cfg.to_json() << '\n';
    return 0;
  }

  if (train->parsed() || sft->parsed()) {
    if (sft->parsed()) cfg.horizontal_updates = 0;
    const IrisArtifacts artifacts = run_iris(cfg);
    std::cout << (sft->parsed() ? "sft" : "train") << ": final checkpoint "
              << artifacts.final_checkpoint << ", metrics " << artifacts.metrics_csv << '\n';
    return 0;
  }

  if (rl->parsed()) {
    cfg.validate();
    const RunCorpora corpora = load_run_corpora(cfg);
    Policy policy = Policy::load(init_checkpoint);
    fs::create_directories(cfg.out_dir);
    {
      std::ofstream echo(fs::path(cfg.out_dir) / "config.json", std::ios::binary);
      echo << cfg.to_json() << '\n';
    }
    Rng master(cfg.seed);
    Rng rng_horizontal = master.split(2);
    const TrigramEmbedder embedder;
    const std::string metrics_path = (fs::path(cfg.out_dir) / "metrics.csv").string();
    run_horizontal(cfg, corpora.rl, policy, embedder, rng_horizontal, metrics_path);
    const std::string final_path = (fs::path(cfg.out_dir) / "checkpoint_final.irpc").string();
    policy.save(final_path);
    std::cout << "rl: final checkpoint " << final_path << ", metrics " << metrics_path
              << '\n';
    return 0;
  }

  if (eval_cmd->parsed()) {
    const Policy policy = Policy::load(eval_opts.checkpoint);
    const Corpus corpus = load_corpus(eval_opts.corpus, Split::test);
    EvalOptions options;
    options.temperature = eval_opts.temperature;
    if (!eval_opts.tier.empty()) {
      auto tier = difficulty_from_string(eval_opts.tier);
      if (!tier) throw ConfigError("unknown tier '" + eval_opts.tier + "'");
      options.tier_filter = *tier;
    }
    const EvalReport report = pass_at_1(policy, corpus, options);
    if (!eval_opts.out.empty()) {
      std::ofstream out(eval_opts.out, std::ios::binary);
      write_report_csv(out, report);
    }
    std::cout << "eval: pass@1 " << format_double(report.overall) << " over "
              << report.total << " problems (" << report.decoding << ")\n";
    return 0;
  }

  if (sweep->parsed()) {
    const std::vector<ExperimentRow> rows =
        mix_ratio_sweep(cfg, parse_double_list(fractions_text), parse_seed_list(seeds_text));
    fs::create_directories(cfg.out_dir);
    std::ofstream out(fs::path(cfg.out_dir) / "sweep.csv", std::ios::binary);
    write_rows_csv(out, rows);
    std::cout << rows_summary(rows);
    std::cout << "sweep: wrote " << (fs::path(cfg.out_dir) / "sweep.csv").string() << '\n';
    return 0;
  }

  if (ablate->parsed()) {
    const std::vector<ExperimentRow> rows = ablation_matrix(cfg, parse_seed_list(seeds_text));
    fs::create_directories(cfg.out_dir);
    std::ofstream out(fs::path(cfg.out_dir) / "ablation.csv", std::ios::binary);
    write_rows_csv(out, rows);
    std::cout << rows_summary(rows);
    std::cout << "ablate: wrote " << (fs::path(cfg.out_dir) / "ablation.csv").string()
              << '\n';
    return 0;
  }

  return 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace iris
