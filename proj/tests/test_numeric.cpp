#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "iris/numeric.hpp"

using iris::canonicalize_number;
using iris::extract_final_answer;

TEST_CASE("canonicalization strips commas, signs and trailing punctuation") {
  // Expected values hand-derived from the canonicalization rules.
  CHECK(canonicalize_number("1,250.")->text == "1250");
  CHECK(canonicalize_number("-7")->text == "-7");
  CHECK(canonicalize_number("+17")->text == "17");
  CHECK(canonicalize_number("42.0")->text == "42");
  CHECK(canonicalize_number("3.50")->text == "3.5");
  CHECK(canonicalize_number("0012")->text == "12");
  CHECK(canonicalize_number("-0")->text == "0");
  CHECK(canonicalize_number("-0.00")->text == "0");
  CHECK(canonicalize_number("(250)")->text == "250");
  CHECK(canonicalize_number("99,")->text == "99");
  CHECK(canonicalize_number("0.25")->text == "0.25");
}

TEST_CASE("non-numerals are rejected") {
  CHECK_FALSE(canonicalize_number("done").has_value());
  CHECK_FALSE(canonicalize_number("x9y").has_value());
  CHECK_FALSE(canonicalize_number("3/4").has_value());
  CHECK_FALSE(canonicalize_number("").has_value());
  CHECK_FALSE(canonicalize_number("-").has_value());
  CHECK_FALSE(canonicalize_number("1.2.3").has_value());
  CHECK_FALSE(canonicalize_number("1e5").has_value());
}

TEST_CASE("integer detection") {
  CHECK(canonicalize_number("17")->is_integer());
  CHECK(canonicalize_number("-3")->is_integer());
  CHECK(canonicalize_number("42.0")->is_integer());  // normalizes to 42
  CHECK_FALSE(canonicalize_number("3.5")->is_integer());
}

TEST_CASE("canonicalization is idempotent") {
  const char* tokens[] = {"1,250.", "-7", "+17", "42.0", "3.50", "0012",
                          "-0",     "12", "0.125", "99999"};
  for (const char* tok : tokens) {
    auto first = canonicalize_number(tok);
    REQUIRE(first.has_value());
    auto again = canonicalize_number(first->text);
    REQUIRE(again.has_value());
    CHECK(again->text == first->text);
  }
}

TEST_CASE("extract_final_answer returns the last numeric token") {
  CHECK(extract_final_answer("Step 5: Therefore the answer is 1,250.")->text == "1250");
  CHECK(extract_final_answer("Step 3: x = -7")->text == "-7");
  CHECK_FALSE(extract_final_answer("Step 4: done").has_value());
  CHECK(extract_final_answer("first 4 then 7")->text == "7");
  // A trailing non-numeric token is skipped in favor of the previous numeral.
  CHECK(extract_final_answer("value 12 units")->text == "12");
  CHECK_FALSE(extract_final_answer("").has_value());
}
