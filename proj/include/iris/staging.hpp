#pragma once

#include <string>
#include <vector>

#include "iris/corpus.hpp"

namespace iris {

// Reserved marker separating the given context from what the policy must
// generate. Never produced by the task generator, so it cannot collide with
// corpus text.
inline constexpr const char* kContinueMarker = "<CONTINUE>";

// One horizontal-curriculum training item: the first prefix_len gold steps
// are given, the remaining steps must be generated. Stage k counts from the
// easiest decomposition (longest prefix): prefix_len = n - k - 2.
struct StageInstance {
  std::string problem_id;
  int stage = 0;       // k in [0, stage_max]
  int prefix_len = 0;  // m_k
  int stage_max = 0;   // n - 2
  std::string question;
  std::vector<std::string> prefix_steps;  // s_1 .. s_m
  std::vector<std::string> gold_suffix;   // s_{m+1} .. s_n, length k + 2
};

// Decomposes a problem into its n-1 stage instances, ordered by stage
// ascending. Throws DataError when the problem has fewer than 2 steps.
std::vector<StageInstance> decompose(const Problem& problem);

// Single stage k of the decomposition without materializing the others.
StageInstance stage_instance(const Problem& problem, int stage);

// Deterministic prompt serialization: question, newline-joined prefix steps,
// then the continuation marker on its own line.
std::string render_prompt(const StageInstance& instance);

// The gold suffix as continuation text (newline-joined).
std::string suffix_text(const StageInstance& instance);

}  // namespace iris
