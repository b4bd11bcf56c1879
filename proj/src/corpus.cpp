#include "iris/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "iris/errors.hpp"
#include "json.hpp"

namespace iris {

const char* to_string(Difficulty d) {
  switch (d) {
    case Difficulty::easy: return "easy";
    case Difficulty::medium: return "medium";
    case Difficulty::hard: return "hard";
  }
  return "?";
}

const char* to_string(Split s) { return s == Split::train ? "train" : "test"; }

std::optional<Difficulty> difficulty_from_string(std::string_view s) {
  if (s == "easy") return Difficulty::easy;
  if (s == "medium") return Difficulty::medium;
  if (s == "hard") return Difficulty::hard;
  return std::nullopt;
}

StepBand step_band(Difficulty d) {
  switch (d) {
    case Difficulty::easy: return {3, 5};
    case Difficulty::medium: return {5, 7};
    case Difficulty::hard: return {7, 9};
  }
  return {3, 5};
}

bool Corpus::has_tier(Difficulty d) const {
  auto it = partitions.find(d);
  return it != partitions.end() && !it->second.empty();
}

std::vector<size_t> Corpus::tier_indices(Difficulty d) const {
  auto it = partitions.find(d);
  return it == partitions.end() ? std::vector<size_t>{} : it->second;
}

std::optional<int> step_label(std::string_view line) {
  // "<keyword> <digits>:" where keyword has no digits, spaces or colons.
  size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  size_t kw_begin = i;
  while (i < line.size() && line[i] != ' ' && line[i] != ':' &&
         !(line[i] >= '0' && line[i] <= '9')) {
    ++i;
  }
  if (i == kw_begin) return std::nullopt;  // no keyword
  if (i >= line.size() || line[i] != ' ') return std::nullopt;
  ++i;
  size_t digits_begin = i;
  long value = 0;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
    value = value * 10 + (line[i] - '0');
    if (value > 1000000) return std::nullopt;
    ++i;
  }
  if (i == digits_begin) return std::nullopt;
  if (i >= line.size() || line[i] != ':') return std::nullopt;
  return static_cast<int>(value);
}

std::vector<std::string> parse_steps(std::string_view text,
                                     std::vector<std::string>* dropped) {
  std::vector<std::string> steps;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty()) {
      if (step_label(line).has_value()) {
        steps.emplace_back(line);
      } else if (dropped != nullptr) {
        dropped->emplace_back(line);
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return steps;
}

void validate_problem(const Problem& p, std::vector<std::string>* warnings) {
  if (p.id.empty()) throw DataError("problem with empty id");
  if (p.n_steps() < 2) {
    throw DataError("problem '" + p.id + "' rejected: fewer than 2 steps");
  }
  for (int i = 0; i < p.n_steps(); ++i) {
    auto label = step_label(p.steps[i]);
    if (!label) {
      throw DataError("problem '" + p.id + "': step " + std::to_string(i + 1) +
                      " does not match the step pattern");
    }
    if (*label != i + 1) {
      throw DataError("problem '" + p.id + "': non-consecutive step label (expected " +
                      std::to_string(i + 1) + ", got " + std::to_string(*label) + ")");
    }
  }
  auto extracted = extract_final_answer(p.steps.back());
  if (!extracted) {
    throw DataError("problem '" + p.id + "': final answer not extractable from last step");
  }
  if (!(*extracted == p.answer)) {
    throw DataError("problem '" + p.id + "': declared answer '" + p.answer.text +
                    "' does not match last step ('" + extracted->text + "')");
  }
  const StepBand band = step_band(p.difficulty);
  if (warnings != nullptr && (p.n_steps() < band.lo || p.n_steps() > band.hi)) {
    warnings->push_back("problem '" + p.id + "': " + std::to_string(p.n_steps()) +
                        " steps outside the " + to_string(p.difficulty) + " band [" +
                        std::to_string(band.lo) + "," + std::to_string(band.hi) + "]");
  }
}

Corpus finalize_corpus(std::vector<Problem> problems, Split split,
                       std::vector<std::string>* warnings) {
  Corpus corpus;
  corpus.split = split;
  corpus.problems = std::move(problems);
  std::set<std::string> ids;
  for (size_t i = 0; i < corpus.problems.size(); ++i) {
    const Problem& p = corpus.problems[i];
    validate_problem(p, warnings);
    if (!ids.insert(p.id).second) {
      throw DataError("duplicate problem id '" + p.id + "'");
    }
    corpus.partitions[p.difficulty].push_back(i);
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, Split split,
                   std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);

  std::vector<Problem> problems;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("parse error at line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      Problem p;
      p.id = record.at("id").get<std::string>();
      p.question = record.at("question").get<std::string>();
      p.steps = record.at("steps").get<std::vector<std::string>>();
      const std::string answer_text = record.at("answer").get<std::string>();
      auto canon = canonicalize_number(answer_text);
      if (!canon) {
        throw DataError("answer '" + answer_text + "' is not a canonical numeral");
      }
      p.answer = *canon;
      auto diff = difficulty_from_string(record.at("difficulty").get<std::string>());
      if (!diff) {
        throw DataError("unknown difficulty '" +
                        record.at("difficulty").get<std::string>() + "'");
      }
      p.difficulty = *diff;
      p.language = record.at("language").get<std::string>();
      problems.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("bad record at line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return finalize_corpus(std::move(problems), split, warnings);
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  for (const Problem& p : corpus.problems) {
    nlohmann::json record{{"id", p.id},
                          {"question", p.question},
                          {"steps", p.steps},
                          {"answer", p.answer.text},
                          {"difficulty", to_string(p.difficulty)},
                          {"language", p.language}};
    out << record.dump() << '\n';
  }
}

void check_no_leakage(const Corpus& train, const Corpus& test) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const Problem& p : train.problems) seen.insert({p.id, p.language});
  for (const Problem& p : test.problems) {
    if (seen.count({p.id, p.language}) > 0) {
      throw DataError("leakage: (" + p.id + ", " + p.language +
                      ") appears in both train and test splits");
    }
  }
}

}  // namespace iris
