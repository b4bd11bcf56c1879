#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <sstream>

#include "iris/errors.hpp"
#include "iris/rewards.hpp"
#include "iris/rng.hpp"
#include "iris/taskgen.hpp"

using namespace iris;

namespace {

// Exact trigram-count cosine, the independent oracle for the embedder.
double brute_trigram_cosine(const std::string& a, const std::string& b) {
  auto counts = [](const std::string& s) {
    std::map<std::string, int> m;
    if (s.size() < 3) {
      if (!s.empty()) m[s] = 1;
      return m;
    }
    for (size_t i = 0; i + 3 <= s.size(); ++i) ++m[s.substr(i, 3)];
    return m;
  };
  const auto ca = counts(a);
  const auto cb = counts(b);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [k, v] : ca) {
    na += static_cast<double>(v) * v;
    auto it = cb.find(k);
    if (it != cb.end()) dot += static_cast<double>(v) * it->second;
  }
  for (const auto& [k, v] : cb) nb += static_cast<double>(v) * v;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

StageInstance test_instance(int n, int stage) {
  Problem p;
  p.id = "r";
  p.question = "reach 100 from 2 by 13";
  for (int i = 1; i < n; ++i) {
    p.steps.push_back(i == 1 ? "Step 1: 2 + 13 = 15"
                             : "Step " + std::to_string(i) + ": + 13 = 41");
  }
  p.steps.push_back("Step " + std::to_string(n) + ": answer 93");
  p.answer = {"93"};
  return stage_instance(p, stage);
}

}  // namespace

TEST_CASE("correctness reward is exact canonical equality") {
  CHECK(correctness_reward(CanonicalNumber{"42"}, {"42"}) == 2.0);
  CHECK(correctness_reward(CanonicalNumber{"42"}, {"43"}) == 0.0);
  CHECK(correctness_reward(std::nullopt, {"42"}) == 0.0);
  // "42.0" canonicalizes to the same form as "42".
  CHECK(correctness_reward(canonicalize_number("42.0"), {"42"}) == 2.0);
}

TEST_CASE("lambda weight decays linearly and vanishes at the hardest stage") {
  CHECK(lambda_weight(0, 4) == 2.5);
  CHECK(lambda_weight(4, 4) == 0.0);
  CHECK(lambda_weight(2, 4) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(lambda_weight(0, 0) == 0.0);  // degenerate single-stage case
  CHECK_THROWS_AS(lambda_weight(5, 4), DataError);
  CHECK_THROWS_AS(lambda_weight(-1, 4), DataError);

  for (int k_max = 1; k_max <= 8; ++k_max) {
    double prev = lambda_weight(0, k_max);
    for (int k = 1; k <= k_max; ++k) {
      const double cur = lambda_weight(k, k_max);
      CHECK(cur < prev);  // strictly decreasing
      prev = cur;
    }
  }
}

TEST_CASE("cosine alignment matches the exact trigram oracle") {
  // Wide-dimension embedder so hashed counts coincide with exact counts.
  const TrigramEmbedder wide(1u << 20);
  const std::string a = "Step 3: add 4 and 5";
  const std::string b = "Step 3: add 4 then 5";
  const double oracle = brute_trigram_cosine(a, b);
  CHECK(oracle > 0.0);
  CHECK(oracle < 1.0);
  CHECK(cosine_alignment(a, b, wide) == doctest::Approx(oracle).epsilon(1e-12));

  const TrigramEmbedder standard;  // default 1024 dims
  CHECK(cosine_alignment(a, a, standard) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_alignment("aaaa", "bbbb", standard) == 0.0);  // disjoint trigrams
  CHECK(cosine_alignment("", "Step 1: x", standard) == 0.0);  // zero vector
  CHECK(cosine_alignment(a, b, standard) ==
        doctest::Approx(oracle).epsilon(0.05));  // hashing may merge a few buckets
}

TEST_CASE("continuation reward follows the numbering rule") {
  CHECK(continuation_reward(3, "Step 4: + 1 = 2") == 1.0);
  CHECK(continuation_reward(3, "Step 1: + 1 = 2") == -0.5);
  CHECK(continuation_reward(0, "Step 1: + 1 = 2") == 1.0);
  CHECK(continuation_reward(3, "Step 2: + 1 = 2") == 0.0);  // neither continue nor restart
  CHECK(continuation_reward(3, "free text with no steps") == 0.0);
  CHECK(continuation_reward(3, "") == 0.0);
  // The first parsed step decides, later ones do not.
  CHECK(continuation_reward(3, "Step 4: a\nStep 1: b") == 1.0);
}

TEST_CASE("integer reward accepts optionally signed integers only") {
  CHECK(integer_reward(canonicalize_number("17")) == 0.5);
  CHECK(integer_reward(canonicalize_number("-3")) == 0.5);
  CHECK(integer_reward(canonicalize_number("3.5")) == 0.0);
  CHECK(integer_reward(std::nullopt) == 0.0);
}

TEST_CASE("composite reward of the gold suffix at stage 0 is maximal") {
  const StageInstance inst = test_instance(6, 0);  // k_max = 4
  const TrigramEmbedder embedder;
  const CanonicalNumber gold{"93"};
  const RewardBreakdown r =
      composite_reward(inst, gold, suffix_text(inst), embedder);
  CHECK(r.r_final == 2.0);
  CHECK(r.r_cos == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.lambda_k == 2.5);
  CHECK(r.r_cont == 1.0);
  CHECK(r.r_int == 0.5);
  CHECK(r.total == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("empty generation earns nothing") {
  const StageInstance inst = test_instance(5, 1);
  const TrigramEmbedder embedder;
  const RewardBreakdown r = composite_reward(inst, {"93"}, "", embedder);
  CHECK(r.r_final == 0.0);
  CHECK(r.r_cos == 0.0);
  CHECK(r.r_cont == 0.0);
  CHECK(r.r_int == 0.0);
  CHECK(r.total == 0.0);
}

TEST_CASE("correctness-only flags zero the shaping terms") {
  const StageInstance inst = test_instance(6, 0);
  const TrigramEmbedder embedder;
  const RewardBreakdown r = composite_reward(inst, {"93"}, suffix_text(inst), embedder,
                                             RewardFlags::correctness_only());
  CHECK(r.total == 2.0);
  CHECK(r.r_cos == 0.0);
  CHECK(r.r_cont == 0.0);
  CHECK(r.r_int == 0.0);
}

TEST_CASE("gold suffix dominates answer-preserving rewrites at stage 0") {
  const StageInstance inst = test_instance(6, 0);
  const TrigramEmbedder embedder;
  const CanonicalNumber gold{"93"};
  const double gold_total =
      composite_reward(inst, gold, suffix_text(inst), embedder).total;
  const char* rivals[] = {
      "Step 5: + 13 = 80\nStep 6: answer 93",
      "Step 5: anything else\nStep 6: answer 93",
      "Step 1: restart\nStep 6: answer 93",
      "answer 93",
  };
  for (const char* rival : rivals) {
    CHECK(composite_reward(inst, gold, rival, embedder).total <= gold_total + 1e-12);
  }
}

TEST_CASE("reward decomposition identity and ranges under fuzzing") {
  GenConfig gen;
  gen.seed = 77;
  gen.count_per_tier = {{Difficulty::easy, 8}, {Difficulty::medium, 6},
                        {Difficulty::hard, 6}};
  const Corpus corpus = generate_corpus(gen, "L0");
  const TrigramEmbedder embedder;
  Rng rng(4242);

  const char* fragments[] = {"Step", "1:", "5:", "answer", "+", "=", "13", "93",
                             "-7",   "3.5", "x",  "", "\n"};
  for (int trial = 0; trial < 2000; ++trial) {
    const Problem& p =
        corpus.problems[static_cast<size_t>(rng.next_below(corpus.size()))];
    const int stage = rng.next_int(0, p.n_steps() - 2);
    const StageInstance inst = stage_instance(p, stage);

    std::string generated;
    switch (rng.next_below(4)) {
      case 0:
        generated = suffix_text(inst);
        break;
      case 1: {  // mutated gold
        generated = suffix_text(inst);
        if (!generated.empty()) generated[generated.size() / 2] = 'q';
        break;
      }
      case 2: {  // token soup
        std::ostringstream soup;
        const int len = rng.next_int(0, 20);
        for (int i = 0; i < len; ++i) {
          soup << fragments[rng.next_below(std::size(fragments))] << ' ';
        }
        generated = soup.str();
        break;
      }
      default:
        generated = "";
    }

    const RewardBreakdown r = composite_reward(inst, p.answer, generated, embedder);
    CHECK(std::abs(r.total - (r.r_final + r.lambda_k * r.r_cos + r.r_cont + r.r_int)) <=
          1e-9);
    CHECK((r.r_final == 0.0 || r.r_final == 2.0));
    CHECK(r.r_cos >= 0.0);
    CHECK(r.r_cos <= 1.0);
    CHECK(r.lambda_k >= 0.0);
    CHECK(r.lambda_k <= kLambdaMax);
    CHECK((r.r_cont == -0.5 || r.r_cont == 0.0 || r.r_cont == 1.0));
    CHECK((r.r_int == 0.0 || r.r_int == 0.5));
    CHECK(r.total >= -0.5);
    CHECK(r.total <= 2.0 + kLambdaMax + 1.0 + 0.5);

    // At the hardest stage the cosine term contributes exactly nothing.
    if (stage == inst.stage_max) {
      CHECK(r.lambda_k * r.r_cos == 0.0);
    }
  }
}
