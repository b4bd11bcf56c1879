#include "iris/eval.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "iris/errors.hpp"
#include "iris/staging.hpp"

namespace iris {

namespace {

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

EvalReport pass_at_1(const Policy& policy, const Corpus& corpus,
                     const EvalOptions& options) {
  EvalReport report;
  std::map<std::string, size_t> tier_correct;
  std::map<std::string, size_t> lang_correct;
  Rng rng(options.seed);

  for (const Problem& problem : corpus.problems) {
    if (options.tier_filter && problem.difficulty != *options.tier_filter) continue;
    const StageInstance hardest = stage_instance(problem, problem.n_steps() - 2);
    const std::vector<int> prompt_ids =
        encode_prompt(policy.vocab(), render_prompt(hardest));
    const int max_len =
        static_cast<int>(
            encode_continuation(policy.vocab(), suffix_text(hardest)).size()) +
        options.gen_slack;
    const std::vector<int> generated =
        policy.sample(prompt_ids, max_len, options.temperature, rng);
    const std::string text = policy.vocab().detokenize(generated);
    const auto answer = generation_final_answer(text);
    const bool correct = answer.has_value() && *answer == problem.answer;

    const std::string tier = to_string(problem.difficulty);
    ++report.total;
    ++report.tier_counts[tier];
    ++report.language_counts[problem.language];
    if (correct) {
      ++report.correct;
      ++tier_correct[tier];
      ++lang_correct[problem.language];
    }
  }
  if (report.total == 0) throw DataError("empty evaluation set");

  report.overall = static_cast<double>(report.correct) / static_cast<double>(report.total);
  for (const auto& [tier, count] : report.tier_counts) {
    report.per_tier[tier] =
        static_cast<double>(tier_correct[tier]) / static_cast<double>(count);
  }
  for (const auto& [lang, count] : report.language_counts) {
    report.per_language[lang] =
        static_cast<double>(lang_correct[lang]) / static_cast<double>(count);
  }
  report.decoding = options.temperature <= 1e-9
                        ? "greedy"
                        : "temperature=" + format_double(options.temperature);
  return report;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

double stderr_of(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

namespace {

// Runs run_iris for one config+seed and evaluates the final policy.
EvalReport run_and_eval(TrainConfig config, uint64_t seed, const std::string& out_dir) {
  config.seed = seed;
  config.out_dir = out_dir;
  const IrisArtifacts artifacts = run_iris(config);
  const Policy policy = Policy::load(artifacts.final_checkpoint);
  const RunCorpora corpora = load_run_corpora(config);
  EvalReport report = pass_at_1(policy, corpora.eval);
  report.config_hash = hex64(fnv1a(config.to_json()));
  return report;
}

ExperimentRow run_row(const TrainConfig& config, const std::string& label,
                      const std::vector<uint64_t>& seeds, const std::string& dir_tag) {
  ExperimentRow row;
  row.label = label;
  for (uint64_t seed : seeds) {
    const std::string out_dir = (std::filesystem::path(config.out_dir) / dir_tag /
                                 ("seed" + std::to_string(seed)))
                                    .string();
    row.last_report = run_and_eval(config, seed, out_dir);
    row.per_seed_pass1.push_back(row.last_report.overall);
  }
  row.mean_pass1 = mean_of(row.per_seed_pass1);
  row.stderr_pass1 = stderr_of(row.per_seed_pass1);
  return row;
}

std::string fraction_tag(double fraction) {
  std::ostringstream tag;
  tag << "mix" << static_cast<int>(std::lround(fraction * 100));
  return tag.str();
}

}  // namespace

std::vector<ExperimentRow> mix_ratio_sweep(const TrainConfig& config,
                                           const std::vector<double>& fractions,
                                           const std::vector<uint64_t>& seeds) {
  if (fractions.size() < 2) throw ConfigError("mix sweep needs at least 2 fractions");
  if (config.anchor_corpus.empty()) {
    throw ConfigError("mix sweep needs anchor_corpus in the config");
  }
  std::vector<ExperimentRow> rows;
  for (double fraction : fractions) {
    TrainConfig variant = config;
    variant.mix_fraction = fraction;
    std::ostringstream label;
    label << static_cast<int>(std::lround(fraction * 100)) << "%";
    rows.push_back(run_row(variant, label.str(), seeds, fraction_tag(fraction)));
  }
  return rows;
}

TrainConfig ablation_config(const TrainConfig& base, const std::string& label) {
  TrainConfig cfg = base;
  cfg.h_only = false;
  cfg.no_curriculum = false;
  cfg.disable_cos = false;
  cfg.disable_cont = false;
  cfg.disable_int = false;
  if (label == "H Only") {
    cfg.h_only = true;
  } else if (label == "V (No Curriculum)") {
    cfg.no_curriculum = true;
    cfg.horizontal_updates = 0;
  } else if (label == "V+H (No Curriculum)") {
    cfg.no_curriculum = true;
  } else if (label == "V+H (Correctness)") {
    cfg.disable_cos = cfg.disable_cont = cfg.disable_int = true;
  } else if (label == "V+H (Full)") {
    // base configuration as-is
  } else {
    throw ConfigError("unknown ablation row '" + label + "'");
  }
  return cfg;
}

std::vector<ExperimentRow> ablation_matrix(const TrainConfig& config,
                                           const std::vector<uint64_t>& seeds) {
  const std::vector<std::pair<std::string, std::string>> rows_spec = {
      {"H Only", "h_only"},
      {"V (No Curriculum)", "v_nocurr"},
      {"V+H (No Curriculum)", "vh_nocurr"},
      {"V+H (Correctness)", "vh_correctness"},
      {"V+H (Full)", "vh_full"},
  };
  std::vector<ExperimentRow> rows;
  for (const auto& [label, tag] : rows_spec) {
    rows.push_back(run_row(ablation_config(config, label), label, seeds, tag));
  }
  return rows;
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "metric,key,value\n";
  out << "pass1,overall," << format_double(report.overall) << '\n';
  out << "count,overall," << report.total << '\n';
  for (const auto& [tier, value] : report.per_tier) {
    out << "pass1,tier:" << tier << ',' << format_double(value) << '\n';
  }
  for (const auto& [tier, count] : report.tier_counts) {
    out << "count,tier:" << tier << ',' << count << '\n';
  }
  for (const auto& [lang, value] : report.per_language) {
    out << "pass1,language:" << lang << ',' << format_double(value) << '\n';
  }
  for (const auto& [lang, count] : report.language_counts) {
    out << "count,language:" << lang << ',' << count << '\n';
  }
  out << "decoding,," << report.decoding << '\n';
  out << "config_hash,," << report.config_hash << '\n';
}

void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "label,mean_pass1,stderr_pass1,seeds\n";
  for (const ExperimentRow& row : rows) {
    out << '"' << row.label << "\"," << format_double(row.mean_pass1) << ','
        << format_double(row.stderr_pass1) << ',';
    for (size_t i = 0; i < row.per_seed_pass1.size(); ++i) {
      if (i > 0) out << ';';
      out << format_double(row.per_seed_pass1[i]);
    }
    out << '\n';
  }
}

std::string rows_summary(const std::vector<ExperimentRow>& rows) {
  std::ostringstream out;
  for (const ExperimentRow& row : rows) {
    out << row.label << ": pass@1 " << format_double(row.mean_pass1);
    if (row.per_seed_pass1.size() > 1) {
      out << " +/- " << format_double(row.stderr_pass1) << " (stderr, "
          << row.per_seed_pass1.size() << " seeds)";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace iris
