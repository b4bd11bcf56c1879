#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace iris {

// A final answer in canonical textual form. Integers are stored exactly
// ("1250", "-7"); non-integers as normalized decimal strings ("3.5", no
// trailing zeros). No floating-point parsing is involved anywhere, so
// equality is exact and never subject to rounding disputes.
struct CanonicalNumber {
  std::string text;

  bool is_integer() const { return text.find('.') == std::string::npos; }
  bool operator==(const CanonicalNumber&) const = default;
};

// Canonicalizes a single token: strips commas, a leading '+', and trailing
// punctuation; normalizes zeros. Returns nullopt if the token is not a plain
// decimal/integer numeral (fractions like "3/4" are deliberately not
// recognized and are left for the caller to flag).
std::optional<CanonicalNumber> canonicalize_number(std::string_view token);

// Returns the last numeric token of the text in canonical form, or nullopt
// when no token canonicalizes (the caller decides whether that is an error).
std::optional<CanonicalNumber> extract_final_answer(std::string_view text);

}  // namespace iris
