#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "iris/errors.hpp"
#include "iris/rng.hpp"
#include "iris/staging.hpp"

using namespace iris;

namespace {

Problem make_problem(int n, const std::string& id = "p") {
  Problem p;
  p.id = id;
  p.question = "reach 100 from 2 by 13";
  for (int i = 1; i <= n; ++i) {
    if (i == n) {
      p.steps.push_back("Step " + std::to_string(i) + ": answer 100");
    } else if (i == 1) {
      p.steps.push_back("Step 1: 2 + 13 = 15");
    } else {
      p.steps.push_back("Step " + std::to_string(i) + ": + 13 = 41");
    }
  }
  p.answer = {"100"};
  p.language = "L0";
  return p;
}

}  // namespace

TEST_CASE("decompose yields n-1 instances with the derived prefix lengths") {
  // n = 6: prefix lengths m_k = n-k-2 enumerate to 4,3,2,1,0.
  const Problem p = make_problem(6);
  const auto instances = decompose(p);
  REQUIRE(instances.size() == 5);
  CHECK(instances[0].stage == 0);
  CHECK(instances[0].prefix_len == 4);
  CHECK(instances[0].gold_suffix.size() == 2);
  CHECK(instances[4].stage == 4);
  CHECK(instances[4].prefix_len == 0);
  CHECK(instances[4].gold_suffix.size() == 6);
  for (const auto& inst : instances) {
    CHECK(inst.stage_max == 4);
    CHECK(inst.prefix_len == 6 - inst.stage - 2);
  }
}

TEST_CASE("minimal problem n=2 has a single stage") {
  const Problem p = make_problem(2);
  const auto instances = decompose(p);
  REQUIRE(instances.size() == 1);
  CHECK(instances[0].stage == 0);
  CHECK(instances[0].stage_max == 0);
  CHECK(instances[0].prefix_len == 0);
  CHECK(instances[0].gold_suffix.size() == 2);
  CHECK(render_prompt(instances[0]) == p.question + "\n" + kContinueMarker);
}

TEST_CASE("n=4 stage 2 requires full-solution generation") {
  const Problem p = make_problem(4);
  const StageInstance inst = stage_instance(p, 2);
  CHECK(inst.prefix_len == 0);
  CHECK(inst.gold_suffix.size() == 4);
}

TEST_CASE("problems with fewer than 2 steps cannot be decomposed") {
  Problem p = make_problem(2);
  p.steps.resize(1);
  CHECK_THROWS_AS(decompose(p), DataError);
  CHECK_THROWS_AS(stage_instance(make_problem(4), 3), DataError);
  CHECK_THROWS_AS(stage_instance(make_problem(4), -1), DataError);
}

TEST_CASE("staging exactness property over randomized problems") {
  Rng rng(2024);
  for (int trial = 0; trial < 1200; ++trial) {
    const int n = rng.next_int(2, 9);
    const Problem p = make_problem(n, "p" + std::to_string(trial));
    const auto instances = decompose(p);
    REQUIRE(instances.size() == static_cast<size_t>(n - 1));

    std::multiset<size_t> suffix_lengths;
    for (int k = 0; k <= n - 2; ++k) {
      const StageInstance& inst = instances[static_cast<size_t>(k)];
      CHECK(inst.stage == k);
      CHECK(inst.prefix_len == n - k - 2);
      CHECK(inst.gold_suffix.size() == static_cast<size_t>(k + 2));
      suffix_lengths.insert(inst.gold_suffix.size());

      // Reconstruction: prefix ++ suffix == the full step list.
      std::vector<std::string> rebuilt = inst.prefix_steps;
      rebuilt.insert(rebuilt.end(), inst.gold_suffix.begin(), inst.gold_suffix.end());
      CHECK(rebuilt == p.steps);

      const std::string prompt = render_prompt(inst);
      const std::string marker = kContinueMarker;
      REQUIRE(prompt.size() >= marker.size());
      CHECK(prompt.substr(prompt.size() - marker.size()) == marker);
    }
    // Suffix lengths are exactly {2, 3, ..., n}.
    std::multiset<size_t> expected;
    for (int len = 2; len <= n; ++len) expected.insert(static_cast<size_t>(len));
    CHECK(suffix_lengths == expected);
  }
}

TEST_CASE("prompt rendering is deterministic and matches the golden form") {
  const Problem p = make_problem(5);
  const StageInstance inst = stage_instance(p, 1);  // prefix of 2 steps
  const std::string expected = p.question + "\n" + p.steps[0] + "\n" + p.steps[1] + "\n" +
                               kContinueMarker;
  CHECK(render_prompt(inst) == expected);
  CHECK(render_prompt(inst) == render_prompt(inst));

  CHECK(suffix_text(inst) == p.steps[2] + "\n" + p.steps[3] + "\n" + p.steps[4]);
}
