#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "iris/corpus.hpp"

namespace iris {

// Closed token inventory shared by policy and trainer. Reserved ids come
// first; content tokens are sorted strings, so ids are stable for a given
// token set. Step headers ("Step 3:") are single tokens matched at line
// starts, which keeps every corpus line round-trippable through
// tokenize/detokenize.
class Vocabulary {
public:
  static constexpr int kPad = 0;
  static constexpr int kBegin = 1;
  static constexpr int kEnd = 2;
  static constexpr int kContinue = 3;
  static constexpr int kNewline = 4;
  static constexpr int kNumReserved = 5;

  // Builds from corpus text plus every integer numeral within the observed
  // value range widened by `int_margin` on both sides (sampling may explore
  // nearby numbers that never occur in gold chains).
  static std::shared_ptr<const Vocabulary> build(const std::vector<const Corpus*>& corpora,
                                                 int int_margin = 20);

  explicit Vocabulary(std::vector<std::string> content_tokens);

  int size() const { return static_cast<int>(id_to_token_.size()); }
  const std::string& token(int id) const { return id_to_token_.at(static_cast<size_t>(id)); }
  // -1 when unknown.
  int id_of(std::string_view token) const;
  bool is_reserved(int id) const { return id < kNumReserved; }

  // Throws DataError on a token outside the vocabulary.
  std::vector<int> tokenize(std::string_view text) const;
  // Inverse of tokenize on corpus text; <END> stops output, <PAD>/<BEGIN>
  // are skipped.
  std::string detokenize(const std::vector<int>& ids) const;

  const std::vector<std::string>& content_tokens() const { return content_tokens_; }

private:
  std::vector<std::string> content_tokens_;
  std::vector<std::string> id_to_token_;
  std::map<std::string, int, std::less<>> token_to_id_;
};

}  // namespace iris
