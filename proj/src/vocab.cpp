#include "iris/vocab.hpp"

#include <algorithm>
#include <set>

#include "iris/errors.hpp"
#include "iris/numeric.hpp"
#include "iris/staging.hpp"

namespace iris {

namespace {

// Length of the step-header prefix "<keyword> <digits>:" of a line, or 0.
size_t header_prefix_len(std::string_view line) {
  size_t i = 0;
  while (i < line.size() && line[i] != ' ' && line[i] != ':' &&
         !(line[i] >= '0' && line[i] <= '9')) {
    ++i;
  }
  if (i == 0 || i >= line.size() || line[i] != ' ') return 0;
  ++i;
  const size_t digits_begin = i;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i == digits_begin || i >= line.size() || line[i] != ':') return 0;
  return i + 1;
}

void collect_line_tokens(std::string_view line, std::set<std::string>& out) {
  const size_t header = header_prefix_len(line);
  if (header > 0) {
    out.insert(std::string(line.substr(0, header)));
    line.remove_prefix(header);
  }
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    size_t begin = pos;
    while (pos < line.size() && line[pos] != ' ') ++pos;
    if (pos > begin) out.insert(std::string(line.substr(begin, pos - begin)));
  }
}

void collect_text_tokens(std::string_view text, std::set<std::string>& out) {
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty()) collect_line_tokens(line, out);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

}  // namespace

std::shared_ptr<const Vocabulary> Vocabulary::build(
    const std::vector<const Corpus*>& corpora, int int_margin) {
  std::set<std::string> tokens;
  long min_int = 0;
  long max_int = 0;
  bool saw_int = false;
  for (const Corpus* corpus : corpora) {
    for (const Problem& p : corpus->problems) {
      collect_text_tokens(p.question, tokens);
      for (const std::string& step : p.steps) collect_text_tokens(step, tokens);
    }
  }
  for (const std::string& tok : tokens) {
    auto canon = canonicalize_number(tok);
    if (canon && canon->is_integer() && tok == canon->text) {
      const long value = std::stol(tok);
      min_int = saw_int ? std::min(min_int, value) : value;
      max_int = saw_int ? std::max(max_int, value) : value;
      saw_int = true;
    }
  }
  if (saw_int) {
    for (long v = min_int - int_margin; v <= max_int + int_margin; ++v) {
      tokens.insert(std::to_string(v));
    }
  }
  return std::make_shared<Vocabulary>(
      std::vector<std::string>(tokens.begin(), tokens.end()));
}

Vocabulary::Vocabulary(std::vector<std::string> content_tokens)
    : content_tokens_(std::move(content_tokens)) {
  std::sort(content_tokens_.begin(), content_tokens_.end());
  content_tokens_.erase(std::unique(content_tokens_.begin(), content_tokens_.end()),
                        content_tokens_.end());
  id_to_token_ = {"<PAD>", "<BEGIN>", "<END>", kContinueMarker, "\n"};
  for (const std::string& tok : content_tokens_) {
    if (tok == kContinueMarker || tok.empty()) continue;
    id_to_token_.push_back(tok);
  }
  for (size_t i = 0; i < id_to_token_.size(); ++i) {
    token_to_id_[id_to_token_[i]] = static_cast<int>(i);
  }
}

int Vocabulary::id_of(std::string_view token) const {
  auto it = token_to_id_.find(token);
  return it == token_to_id_.end() ? -1 : it->second;
}

std::vector<int> Vocabulary::tokenize(std::string_view text) const {
  std::vector<int> ids;
  bool first_line = true;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!first_line) ids.push_back(kNewline);
    first_line = false;

    const size_t header = header_prefix_len(line);
    if (header > 0) {
      const int id = id_of(line.substr(0, header));
      if (id < 0) {
        throw DataError("unknown token '" + std::string(line.substr(0, header)) + "'");
      }
      ids.push_back(id);
      line.remove_prefix(header);
    }
    size_t lp = 0;
    while (lp < line.size()) {
      while (lp < line.size() && line[lp] == ' ') ++lp;
      size_t begin = lp;
      while (lp < line.size() && line[lp] != ' ') ++lp;
      if (lp > begin) {
        const std::string_view word = line.substr(begin, lp - begin);
        const int id = id_of(word);
        if (id < 0) throw DataError("unknown token '" + std::string(word) + "'");
        ids.push_back(id);
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return ids;
}

std::string Vocabulary::detokenize(const std::vector<int>& ids) const {
  std::string out;
  bool at_line_start = true;
  for (int id : ids) {
    if (id == kPad || id == kBegin) continue;
    if (id == kEnd) break;
    if (id == kNewline) {
      out.push_back('\n');
      at_line_start = true;
      continue;
    }
    if (!at_line_start) out.push_back(' ');
    out += token(id);
    at_line_start = false;
  }
  return out;
}

}  // namespace iris
