#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iris/corpus.hpp"
#include "iris/rng.hpp"

namespace iris {

// Surface forms for one synthetic language. Digits, arithmetic symbols and
// the step-header keyword are shared across all lexicons (the analog of the
// paper's shared-numeral setting); only content words differ.
struct Lexicon {
  std::string language;                         // tag, e.g. "L0"
  std::map<std::string, std::string> word_map;  // template token -> surface token

  // Throws ConfigError unless word_map is a bijection over the template set.
  void validate() const;
  const std::string& word(const std::string& key) const;
};

// Three built-in parallel lexicons L0 (English-like), L1, L2.
std::vector<Lexicon> default_lexicons();
const Lexicon& lexicon_for(const std::vector<Lexicon>& lexicons,
                           const std::string& language);

struct GenConfig {
  std::map<Difficulty, int> count_per_tier;
  uint64_t seed = 0;
  std::vector<Lexicon> lexicons = default_lexicons();
  int increment_lo = 11;  // per-step operand range
  int increment_hi = 19;

  void validate() const;
};

// Chain-walk targets shared by every generated problem. Both families use a
// fixed per-step increment so each problem is a pure accumulate or subtract
// chain whose length is controlled exactly.
inline constexpr int kClimbGoal = 100;  // add v until the total reaches the goal
inline constexpr int kFallGoal = 0;     // subtract v until at or below the goal

// Emits a validated corpus of step-wise chain problems for one language.
// Step counts are uniform within the tier band; every final answer is exact
// by construction; byte-identical output for equal (config, language).
Corpus generate_corpus(const GenConfig& config, const std::string& language);

// Seeded stratified mixture: round(fraction_a * N) items sampled from a, the
// remainder from b, preserving b's per-tier ratios. N defaults to b's size.
Corpus mix_corpora(const Corpus& a, const Corpus& b, double fraction_a, uint64_t seed,
                   std::optional<size_t> target_size = std::nullopt);

}  // namespace iris
