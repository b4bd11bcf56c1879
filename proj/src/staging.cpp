#include "iris/staging.hpp"

#include <sstream>

#include "iris/errors.hpp"

namespace iris {

StageInstance stage_instance(const Problem& problem, int stage) {
  const int n = problem.n_steps();
  if (n < 2) {
    throw DataError("problem '" + problem.id + "' has fewer than 2 steps");
  }
  const int stage_max = n - 2;
  if (stage < 0 || stage > stage_max) {
    throw DataError("stage " + std::to_string(stage) + " out of range for n=" +
                    std::to_string(n));
  }
  StageInstance inst;
  inst.problem_id = problem.id;
  inst.stage = stage;
  inst.stage_max = stage_max;
  inst.prefix_len = n - stage - 2;
  inst.question = problem.question;
  inst.prefix_steps.assign(problem.steps.begin(), problem.steps.begin() + inst.prefix_len);
  inst.gold_suffix.assign(problem.steps.begin() + inst.prefix_len, problem.steps.end());
  return inst;
}

std::vector<StageInstance> decompose(const Problem& problem) {
  const int n = problem.n_steps();
  if (n < 2) {
    throw DataError("problem '" + problem.id + "' has fewer than 2 steps");
  }
  std::vector<StageInstance> instances;
  instances.reserve(static_cast<size_t>(n - 1));
  for (int k = 0; k <= n - 2; ++k) {
    instances.push_back(stage_instance(problem, k));
  }
  return instances;
}

std::string render_prompt(const StageInstance& instance) {
  std::ostringstream out;
  out << instance.question;
  for (const std::string& step : instance.prefix_steps) {
    out << '\n' << step;
  }
  out << '\n' << kContinueMarker;
  return out.str();
}

std::string suffix_text(const StageInstance& instance) {
  std::ostringstream out;
  for (size_t i = 0; i < instance.gold_suffix.size(); ++i) {
    if (i > 0) out << '\n';
    out << instance.gold_suffix[i];
  }
  return out.str();
}

}  // namespace iris
