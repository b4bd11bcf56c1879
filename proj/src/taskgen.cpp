#include "iris/taskgen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "iris/errors.hpp"

namespace iris {

namespace {

const std::vector<std::string>& template_words() {
  static const std::vector<std::string> words = {"reach", "fall", "from",
                                                 "by",    "less", "answer"};
  return words;
}

struct ChainSpec {
  bool climbing;  // false: falling
  int start;
  int increment;
  int n_steps;  // applications + 1 (final announcement step)
};

// Interval of valid start values for a chain of `apps` applications that
// crosses its goal exactly on the last application.
struct StartRange {
  int lo;
  int hi;
  bool empty() const { return lo > hi; }
};

StartRange climb_start_range(int apps, int v) {
  // start + (apps-1)*v < goal <= start + apps*v, start >= 2
  return {std::max(2, kClimbGoal - apps * v), kClimbGoal - 1 - (apps - 1) * v};
}

StartRange fall_start_range(int apps, int v) {
  // start - (apps-1)*v > goal >= start - apps*v
  return {kFallGoal + (apps - 1) * v + 1, kFallGoal + apps * v};
}

std::string render_question(const ChainSpec& c, const Lexicon& lex) {
  // The trailing "<sym> start increment" recap repeats the operands in the
  // shared symbol set; the recap symbol encodes the chain family.
  std::ostringstream out;
  if (c.climbing) {
    out << lex.word("reach") << ' ' << kClimbGoal << ' ' << lex.word("from") << ' '
        << c.start << ' ' << lex.word("by") << ' ' << c.increment << " : " << c.start
        << ' ' << c.increment;
  } else {
    out << lex.word("fall") << ' ' << kFallGoal << ' ' << lex.word("from") << ' '
        << c.start << ' ' << lex.word("less") << ' ' << c.increment << " ; " << c.start
        << ' ' << c.increment;
  }
  return out.str();
}

std::vector<std::string> render_steps(const ChainSpec& c, const Lexicon& lex) {
  std::vector<std::string> steps;
  const char op = c.climbing ? '+' : '-';
  int acc = c.start;
  for (int i = 1; i < c.n_steps; ++i) {
    const int next = c.climbing ? acc + c.increment : acc - c.increment;
    std::ostringstream line;
    line << "Step " << i << ": ";
    if (i == 1) line << acc << ' ';
    line << op << ' ' << c.increment << " = " << next;
    steps.push_back(line.str());
    acc = next;
  }
  std::ostringstream last;
  last << "Step " << c.n_steps << ": " << lex.word("answer") << ' ' << acc;
  steps.push_back(last.str());
  return steps;
}

Problem make_problem(const ChainSpec& c, const Lexicon& lex, const std::string& id,
                     Difficulty tier) {
  Problem p;
  p.id = id;
  p.language = lex.language;
  p.difficulty = tier;
  p.question = render_question(c, lex);
  p.steps = render_steps(c, lex);
  auto answer = extract_final_answer(p.steps.back());
  p.answer = *answer;
  return p;
}

}  // namespace

void Lexicon::validate() const {
  if (language.empty()) throw ConfigError("lexicon with empty language tag");
  std::set<std::string> surfaces;
  for (const std::string& key : template_words()) {
    auto it = word_map.find(key);
    if (it == word_map.end()) {
      throw ConfigError("lexicon '" + language + "' misses word '" + key + "'");
    }
    if (!surfaces.insert(it->second).second) {
      throw ConfigError("lexicon '" + language + "' word map is not a bijection ('" +
                        it->second + "' repeats)");
    }
  }
}

const std::string& Lexicon::word(const std::string& key) const {
  auto it = word_map.find(key);
  if (it == word_map.end()) {
    throw ConfigError("lexicon '" + language + "' misses word '" + key + "'");
  }
  return it->second;
}

std::vector<Lexicon> default_lexicons() {
  std::vector<Lexicon> lexicons(3);
  lexicons[0].language = "L0";
  lexicons[0].word_map = {{"reach", "reach"}, {"fall", "fall"},     {"from", "from"},
                          {"by", "by"},       {"less", "less"},     {"answer", "answer"}};
  lexicons[1].language = "L1";
  lexicons[1].word_map = {{"reach", "taru"},  {"fall", "pado"},     {"from", "sevi"},
                          {"by", "kana"},     {"less", "mero"},     {"answer", "uttar"}};
  lexicons[2].language = "L2";
  lexicons[2].word_map = {{"reach", "zilga"}, {"fall", "ronu"},     {"from", "eski"},
                          {"by", "velt"},     {"less", "armo"},     {"answer", "resulta"}};
  return lexicons;
}

const Lexicon& lexicon_for(const std::vector<Lexicon>& lexicons,
                           const std::string& language) {
  for (const Lexicon& lex : lexicons) {
    if (lex.language == language) return lex;
  }
  throw ConfigError("no lexicon for language '" + language + "'");
}

void GenConfig::validate() const {
  for (const auto& [tier, count] : count_per_tier) {
    if (count < 0) throw ConfigError("negative count for tier");
  }
  if (increment_lo < 1 || increment_hi < increment_lo) {
    throw ConfigError("degenerate increment range");
  }
  if (lexicons.empty()) throw ConfigError("no lexicons configured");
  for (const Lexicon& lex : lexicons) lex.validate();
}

Corpus generate_corpus(const GenConfig& config, const std::string& language) {
  config.validate();
  const Lexicon& lex = lexicon_for(config.lexicons, language);

  Rng rng(config.seed);
  std::vector<Problem> problems;
  std::set<std::tuple<bool, int, int>> used;  // (family, increment, start)

  for (Difficulty tier : {Difficulty::easy, Difficulty::medium, Difficulty::hard}) {
    auto it = config.count_per_tier.find(tier);
    const int count = (it == config.count_per_tier.end()) ? 0 : it->second;
    const StepBand band = step_band(tier);
    int made = 0;
    int attempts = 0;
    const int max_attempts = 200 * std::max(count, 1) + 10000;
    while (made < count) {
      if (++attempts > max_attempts) {
        throw DataError(std::string("task supply exhausted for tier ") + to_string(tier) +
                        "; lower the count or widen the increment range");
      }
      ChainSpec spec;
      spec.n_steps = rng.next_int(band.lo, band.hi);
      spec.climbing = rng.next_bool();
      spec.increment = rng.next_int(config.increment_lo, config.increment_hi);
      const int apps = spec.n_steps - 1;
      const StartRange range = spec.climbing ? climb_start_range(apps, spec.increment)
                                             : fall_start_range(apps, spec.increment);
      if (range.empty()) continue;
      spec.start = rng.next_int(range.lo, range.hi);
      if (!used.insert({spec.climbing, spec.increment, spec.start}).second) continue;

      std::ostringstream id;
      id << language << '-' << to_string(tier) << '-' << made;
      problems.push_back(make_problem(spec, lex, id.str(), tier));
      ++made;
    }
  }
  return finalize_corpus(std::move(problems), Split::train);
}

Corpus mix_corpora(const Corpus& a, const Corpus& b, double fraction_a, uint64_t seed,
                   std::optional<size_t> target_size) {
  if (fraction_a < 0.0 || fraction_a > 1.0) {
    throw ConfigError("mix fraction must lie in [0,1]");
  }
  if (a.split != b.split) throw DataError("mix_corpora: corpora have different splits");
  const size_t total = target_size.value_or(b.size());
  if (b.size() == 0) throw DataError("mix_corpora: empty base corpus");

  // Per-tier targets follow b's tier proportions (largest-remainder rounding).
  std::vector<Difficulty> tiers;
  std::vector<size_t> tier_targets;
  {
    std::vector<double> exact;
    std::vector<double> remainders;
    size_t assigned = 0;
    for (const auto& [tier, indices] : b.partitions) {
      tiers.push_back(tier);
      const double want = static_cast<double>(indices.size()) * total / b.size();
      exact.push_back(want);
      tier_targets.push_back(static_cast<size_t>(want));
      remainders.push_back(want - std::floor(want));
      assigned += tier_targets.back();
    }
    while (assigned < total) {
      size_t best = 0;
      for (size_t i = 1; i < remainders.size(); ++i) {
        if (remainders[i] > remainders[best]) best = i;
      }
      ++tier_targets[best];
      remainders[best] = -1.0;
      ++assigned;
    }
  }

  Rng rng(seed);
  std::vector<Problem> mixed;
  for (size_t ti = 0; ti < tiers.size(); ++ti) {
    const Difficulty tier = tiers[ti];
    const size_t tier_total = tier_targets[ti];
    const size_t take_a =
        static_cast<size_t>(std::llround(fraction_a * static_cast<double>(tier_total)));
    const size_t take_b = tier_total - take_a;

    std::vector<size_t> from_a = a.tier_indices(tier);
    std::vector<size_t> from_b = b.tier_indices(tier);
    if (take_a > from_a.size()) {
      throw DataError(std::string("mix_corpora: corpus a lacks ") + to_string(tier) +
                      " problems (need " + std::to_string(take_a) + ", have " +
                      std::to_string(from_a.size()) + ")");
    }
    if (take_b > from_b.size()) {
      throw DataError(std::string("mix_corpora: corpus b lacks ") + to_string(tier) +
                      " problems");
    }
    rng.shuffle(from_a);
    rng.shuffle(from_b);
    for (size_t i = 0; i < take_a; ++i) mixed.push_back(a.problems[from_a[i]]);
    for (size_t i = 0; i < take_b; ++i) mixed.push_back(b.problems[from_b[i]]);
  }
  return finalize_corpus(std::move(mixed), b.split);
}

}  // namespace iris
