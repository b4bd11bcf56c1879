#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iris/numeric.hpp"

namespace iris {

enum class Difficulty { easy, medium, hard };
enum class Split { train, test };

const char* to_string(Difficulty d);
const char* to_string(Split s);
std::optional<Difficulty> difficulty_from_string(std::string_view s);

// Inclusive step-count band implied by a difficulty tier. Violations are
// warnings at load time, not rejections, so imported data is tolerated.
struct StepBand {
  int lo;
  int hi;
};
StepBand step_band(Difficulty d);

struct Problem {
  std::string id;
  std::string question;
  std::vector<std::string> steps;  // each "Step N: ...", labels 1..n
  CanonicalNumber answer;
  Difficulty difficulty = Difficulty::easy;
  std::string language;  // e.g. "L0"

  int n_steps() const { return static_cast<int>(steps.size()); }
};

struct Corpus {
  std::vector<Problem> problems;
  std::map<Difficulty, std::vector<size_t>> partitions;
  Split split = Split::train;

  size_t size() const { return problems.size(); }
  bool has_tier(Difficulty d) const;
  std::vector<size_t> tier_indices(Difficulty d) const;
};

// Splits solution text on newlines and keeps lines matching the step pattern
// "<keyword> <digits>:" (keyword is language-variant, digits are Arabic).
// Non-matching non-empty lines are appended to *dropped when provided.
std::vector<std::string> parse_steps(std::string_view text,
                                     std::vector<std::string>* dropped = nullptr);

// Label of a step line ("Step 7: ..." -> 7), or nullopt if it does not match
// the step pattern.
std::optional<int> step_label(std::string_view step_line);

// Validates one problem against all Problem invariants; appends band
// violations to *warnings. Throws DataError on hard violations.
void validate_problem(const Problem& p, std::vector<std::string>* warnings = nullptr);

// Rebuilds partitions and checks id uniqueness; call after assembling
// problems by hand. Throws DataError on violations.
Corpus finalize_corpus(std::vector<Problem> problems, Split split,
                       std::vector<std::string>* warnings = nullptr);

// Line-delimited JSON records {id, question, steps[], answer, difficulty,
// language}, UTF-8. Parse errors name the offending line number.
Corpus load_corpus(const std::string& path, Split split,
                   std::vector<std::string>* warnings = nullptr);
void save_corpus(const Corpus& corpus, const std::string& path);

// Leakage guard: no (id, language) pair of the train split may appear in a
// test split. Throws DataError when violated.
void check_no_leakage(const Corpus& train, const Corpus& test);

}  // namespace iris
