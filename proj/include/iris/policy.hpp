#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "iris/rng.hpp"
#include "iris/vocab.hpp"

namespace iris {

struct PolicyConfig {
  int order = 3;                       // context length in tokens
  uint64_t buckets = uint64_t{1} << 20;  // hash-bucket count bounding memory

  bool operator==(const PolicyConfig&) const = default;
};

struct LogProbResult {
  double total = 0.0;  // sum of per-token conditional log-probs, <= 0
  std::vector<double> per_token;
};

// Context-conditioned tabular softmax policy. Each hashed window of the last
// `order` token ids owns one logits row over the vocabulary; rows materialize
// lazily on first update and unseen contexts read as the uniform default.
// Hash collisions fold distinct contexts into one row; that is the documented
// memory/capacity trade-off.
class Policy {
public:
  Policy(std::shared_ptr<const Vocabulary> vocab, PolicyConfig config);

  const Vocabulary& vocab() const { return *vocab_; }
  std::shared_ptr<const Vocabulary> vocab_ptr() const { return vocab_; }
  const PolicyConfig& config() const { return config_; }

  // Hash key of the context window ending just before `pos` in `tokens`.
  uint64_t context_key(const std::vector<int>& tokens, size_t pos) const;
  // One key per continuation position, given the prompt.
  std::vector<uint64_t> continuation_keys(const std::vector<int>& prompt,
                                          const std::vector<int>& continuation) const;

  // Softmax over the row for `key` (uniform when the row is absent).
  std::vector<double> probs_at(uint64_t key, double temperature = 1.0) const;
  std::vector<double> log_probs_at(uint64_t key) const;
  // Raw logit entry; absent rows read as 0.
  double logit(uint64_t key, int token) const;

  LogProbResult log_prob(const std::vector<int>& prompt,
                         const std::vector<int>& continuation) const;

  // Autoregressive sampling until <END> or max_len tokens. temperature <= 1e-9
  // selects greedy argmax (lowest id wins ties).
  std::vector<int> sample(const std::vector<int>& prompt, int max_len, double temperature,
                          Rng& rng) const;

  // One minimizing step on mean cross-entropy over the batch; returns the
  // pre-update mean per-token cross-entropy. Gradients are analytic
  // (softmax minus one-hot) and touch only the context rows that occur.
  struct SftExample {
    std::vector<int> prompt;
    std::vector<int> target;  // includes the terminating <END>
  };
  double sft_step(const std::vector<SftExample>& batch, double learning_rate);

  // Adds scale * grad into the logits rows, materializing rows as needed.
  void apply_gradient(const std::unordered_map<uint64_t, std::vector<double>>& grad,
                      double scale);

  // Deep copy intended to be used immutably (the reference policy).
  Policy clone_frozen() const { return *this; }

  size_t row_count() const { return rows_.size(); }
  uint64_t update_count() const { return updates_; }

  // Versioned binary checkpoint (vocabulary included).
  void save(const std::string& path) const;
  static Policy load(const std::string& path);

  bool equal_parameters(const Policy& other) const;

private:
  const std::vector<double>* find_row(uint64_t key) const;

  std::shared_ptr<const Vocabulary> vocab_;
  PolicyConfig config_;
  std::unordered_map<uint64_t, std::vector<double>> rows_;
  uint64_t updates_ = 0;
};

// Encodes prompt text for the policy: <BEGIN> followed by the token ids.
std::vector<int> encode_prompt(const Vocabulary& vocab, const std::string& prompt_text);
// Encodes a gold continuation: token ids followed by <END>.
std::vector<int> encode_continuation(const Vocabulary& vocab, const std::string& text);

}  // namespace iris
