#include "iris/numeric.hpp"

#include <algorithm>
#include <cctype>

namespace iris {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// ':' stays out of this set so step labels like "4:" never read as numbers.
bool is_trailing_punct(char c) {
  switch (c) {
    case '.':
    case ',':
    case ';':
    case '!':
    case '?':
    case ')':
    case ']':
    case '}':
    case '"':
    case '\'':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::optional<CanonicalNumber> canonicalize_number(std::string_view token) {
  std::string s;
  s.reserve(token.size());
  for (char c : token) {
    if (c != ',') s.push_back(c);  // thousands separators
  }

  // Trailing sentence punctuation. A '.' followed by digits is a decimal
  // point and survives; a final bare '.' is punctuation and is dropped.
  while (!s.empty() && is_trailing_punct(s.back())) {
    if (s.back() == '.') {
      s.pop_back();
    } else {
      s.pop_back();
    }
  }
  while (!s.empty() && (s.front() == '(' || s.front() == '[' || s.front() == '"')) {
    s.erase(s.begin());
  }
  if (s.empty()) return std::nullopt;

  size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') {
    negative = (s[pos] == '-');
    ++pos;
  }

  std::string int_part;
  while (pos < s.size() && is_digit(s[pos])) int_part.push_back(s[pos++]);
  if (int_part.empty()) return std::nullopt;

  std::string frac_part;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && is_digit(s[pos])) frac_part.push_back(s[pos++]);
    if (frac_part.empty()) return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;  // stray characters: not a numeral

  // Normalize: no leading zeros, no trailing fractional zeros, no "-0".
  size_t first = int_part.find_first_not_of('0');
  int_part = (first == std::string::npos) ? "0" : int_part.substr(first);
  while (!frac_part.empty() && frac_part.back() == '0') frac_part.pop_back();

  std::string out;
  if (negative && !(int_part == "0" && frac_part.empty())) out.push_back('-');
  out += int_part;
  if (!frac_part.empty()) {
    out.push_back('.');
    out += frac_part;
  }
  return CanonicalNumber{out};
}

std::optional<CanonicalNumber> extract_final_answer(std::string_view text) {
  // Scan whitespace-delimited tokens from the end; the last one that
  // canonicalizes wins.
  size_t end = text.size();
  while (end > 0) {
    while (end > 0 && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    if (end == 0) break;
    size_t begin = end;
    while (begin > 0 && !std::isspace(static_cast<unsigned char>(text[begin - 1]))) --begin;
    if (auto num = canonicalize_number(text.substr(begin, end - begin))) {
      return num;
    }
    end = begin;
  }
  return std::nullopt;
}

}  // namespace iris
