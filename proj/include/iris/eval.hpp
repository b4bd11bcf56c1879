#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "iris/policy.hpp"
#include "iris/trainer.hpp"

namespace iris {

struct EvalOptions {
  double temperature = 0.0;  // 0: greedy decoding (the default and the report mode)
  int gen_slack = 8;
  std::optional<Difficulty> tier_filter;
  uint64_t seed = 0;  // only consulted when temperature > 0
};

struct EvalReport {
  double overall = 0.0;
  size_t total = 0;
  size_t correct = 0;
  std::map<std::string, double> per_tier;
  std::map<std::string, double> per_language;
  std::map<std::string, size_t> tier_counts;
  std::map<std::string, size_t> language_counts;
  std::string decoding;
  std::string config_hash;
};

// Greedy pass@1: decode a full solution from [question, <CONTINUE>], extract
// the final answer, count exact canonical matches. Undecodable answers count
// as incorrect; an empty evaluation set is an error.
EvalReport pass_at_1(const Policy& policy, const Corpus& corpus,
                     const EvalOptions& options = {});

// One experiment row aggregated over seeds.
struct ExperimentRow {
  std::string label;
  std::vector<double> per_seed_pass1;
  double mean_pass1 = 0.0;
  double stderr_pass1 = 0.0;
  EvalReport last_report;
};

double mean_of(const std::vector<double>& xs);
double stderr_of(const std::vector<double>& xs);

// Full IRIS per anchor fraction on mixed corpora, all else held fixed.
// config.anchor_corpus and config.train_corpus name the two sources.
std::vector<ExperimentRow> mix_ratio_sweep(const TrainConfig& config,
                                           const std::vector<double>& fractions,
                                           const std::vector<uint64_t>& seeds);

// The five curriculum/reward ablation rows, labelled like the reference
// comparison: H Only / V (No Curriculum) / V+H (No Curriculum) /
// V+H (Correctness) / V+H (Full).
std::vector<ExperimentRow> ablation_matrix(const TrainConfig& config,
                                           const std::vector<uint64_t>& seeds);

// A variant of `config` implementing one ablation row by label.
TrainConfig ablation_config(const TrainConfig& base, const std::string& label);

void write_report_csv(std::ostream& out, const EvalReport& report);
void write_rows_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::string rows_summary(const std::vector<ExperimentRow>& rows);

}  // namespace iris
