#include "iris/policy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "iris/errors.hpp"

namespace iris {

namespace {

constexpr char kMagic[8] = {'I', 'R', 'I', 'S', 'P', 'O', 'L', '1'};

uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 29;
  return h;
}

void write_u64(std::ofstream& out, uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

uint64_t read_u64(std::ifstream& in) {
  uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void write_string(std::ofstream& out, const std::string& s) {
  write_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::ifstream& in) {
  const uint64_t len = read_u64(in);
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  return s;
}

}  // namespace

Policy::Policy(std::shared_ptr<const Vocabulary> vocab, PolicyConfig config)
    : vocab_(std::move(vocab)), config_(config) {
  if (config_.order < 1) throw ConfigError("policy order must be >= 1");
  if (config_.buckets == 0) throw ConfigError("policy bucket count must be positive");
}

uint64_t Policy::context_key(const std::vector<int>& tokens, size_t pos) const {
  uint64_t h = 0x243f6a8885a308d3ULL;
  for (int back = config_.order; back >= 1; --back) {
    const int tok = (pos >= static_cast<size_t>(back))
                        ? tokens[pos - static_cast<size_t>(back)]
                        : Vocabulary::kPad;
    h = mix(h, static_cast<uint64_t>(tok));
  }
  return h % config_.buckets;
}

std::vector<uint64_t> Policy::continuation_keys(const std::vector<int>& prompt,
                                                const std::vector<int>& continuation) const {
  std::vector<int> combined = prompt;
  combined.insert(combined.end(), continuation.begin(), continuation.end());
  std::vector<uint64_t> keys(continuation.size());
  for (size_t i = 0; i < continuation.size(); ++i) {
    keys[i] = context_key(combined, prompt.size() + i);
  }
  return keys;
}

const std::vector<double>* Policy::find_row(uint64_t key) const {
  auto it = rows_.find(key);
  return it == rows_.end() ? nullptr : &it->second;
}

std::vector<double> Policy::probs_at(uint64_t key, double temperature) const {
  const int v = vocab_->size();
  const std::vector<double>* row = find_row(key);
  std::vector<double> probs(static_cast<size_t>(v));
  if (row == nullptr) {
    std::fill(probs.begin(), probs.end(), 1.0 / v);
    return probs;
  }
  const double inv_t = 1.0 / std::max(temperature, 1e-12);
  double max_logit = (*row)[0];
  for (double z : *row) max_logit = std::max(max_logit, z);
  double sum = 0.0;
  for (int j = 0; j < v; ++j) {
    probs[static_cast<size_t>(j)] = std::exp(((*row)[static_cast<size_t>(j)] - max_logit) * inv_t);
    sum += probs[static_cast<size_t>(j)];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

std::vector<double> Policy::log_probs_at(uint64_t key) const {
  const int v = vocab_->size();
  const std::vector<double>* row = find_row(key);
  std::vector<double> out(static_cast<size_t>(v));
  if (row == nullptr) {
    std::fill(out.begin(), out.end(), -std::log(static_cast<double>(v)));
    return out;
  }
  double max_logit = (*row)[0];
  for (double z : *row) max_logit = std::max(max_logit, z);
  double sum = 0.0;
  for (double z : *row) sum += std::exp(z - max_logit);
  const double lse = max_logit + std::log(sum);
  for (int j = 0; j < v; ++j) out[static_cast<size_t>(j)] = (*row)[static_cast<size_t>(j)] - lse;
  return out;
}

double Policy::logit(uint64_t key, int token) const {
  const std::vector<double>* row = find_row(key);
  return row == nullptr ? 0.0 : (*row)[static_cast<size_t>(token)];
}

LogProbResult Policy::log_prob(const std::vector<int>& prompt,
                               const std::vector<int>& continuation) const {
  LogProbResult result;
  result.per_token.reserve(continuation.size());
  const std::vector<uint64_t> keys = continuation_keys(prompt, continuation);
  for (size_t i = 0; i < continuation.size(); ++i) {
    const std::vector<double> lp = log_probs_at(keys[i]);
    const double token_lp = lp[static_cast<size_t>(continuation[i])];
    result.per_token.push_back(token_lp);
    result.total += token_lp;
  }
  return result;
}

std::vector<int> Policy::sample(const std::vector<int>& prompt, int max_len,
                                double temperature, Rng& rng) const {
  std::vector<int> combined = prompt;
  std::vector<int> out;
  const bool greedy = temperature <= 1e-9;
  for (int step = 0; step < max_len; ++step) {
    const uint64_t key = context_key(combined, combined.size());
    int chosen = 0;
    if (greedy) {
      const std::vector<double> lp = log_probs_at(key);
      for (int j = 1; j < vocab_->size(); ++j) {
        if (lp[static_cast<size_t>(j)] > lp[static_cast<size_t>(chosen)]) chosen = j;
      }
    } else {
      const std::vector<double> probs = probs_at(key, temperature);
      const double u = rng.next_double();
      double cum = 0.0;
      chosen = vocab_->size() - 1;
      for (int j = 0; j < vocab_->size(); ++j) {
        cum += probs[static_cast<size_t>(j)];
        if (u < cum) {
          chosen = j;
          break;
        }
      }
    }
    out.push_back(chosen);
    combined.push_back(chosen);
    if (chosen == Vocabulary::kEnd) break;
  }
  return out;
}

double Policy::sft_step(const std::vector<SftExample>& batch, double learning_rate) {
  if (batch.empty()) throw DataError("sft_step: empty batch");
  std::unordered_map<uint64_t, std::vector<double>> grad;
  double nll = 0.0;
  size_t token_count = 0;
  for (const SftExample& ex : batch) {
    const std::vector<uint64_t> keys = continuation_keys(ex.prompt, ex.target);
    for (size_t i = 0; i < ex.target.size(); ++i) {
      const std::vector<double> probs = probs_at(keys[i]);
      const int target = ex.target[i];
      nll -= std::log(std::max(probs[static_cast<size_t>(target)], 1e-300));
      auto [it, inserted] =
          grad.try_emplace(keys[i], static_cast<size_t>(vocab_->size()), 0.0);
      std::vector<double>& g = it->second;
      for (int j = 0; j < vocab_->size(); ++j) g[static_cast<size_t>(j)] += probs[static_cast<size_t>(j)];
      g[static_cast<size_t>(target)] -= 1.0;
      ++token_count;
    }
  }
  // grad holds d(summed NLL)/d(logits); descend.
  if (learning_rate != 0.0) apply_gradient(grad, -learning_rate);
  ++updates_;
  return nll / static_cast<double>(token_count);
}

void Policy::apply_gradient(const std::unordered_map<uint64_t, std::vector<double>>& grad,
                            double scale) {
  for (const auto& [key, g] : grad) {
    auto [it, inserted] = rows_.try_emplace(key, static_cast<size_t>(vocab_->size()), 0.0);
    std::vector<double>& row = it->second;
    for (size_t j = 0; j < row.size(); ++j) row[j] += scale * g[j];
  }
}

void Policy::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, static_cast<uint64_t>(config_.order));
  write_u64(out, config_.buckets);
  write_u64(out, updates_);
  const auto& tokens = vocab_->content_tokens();
  write_u64(out, tokens.size());
  for (const std::string& tok : tokens) write_string(out, tok);

  std::vector<uint64_t> keys;
  keys.reserve(rows_.size());
  for (const auto& [key, row] : rows_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  write_u64(out, keys.size());
  for (uint64_t key : keys) {
    write_u64(out, key);
    const std::vector<double>& row = rows_.at(key);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

Policy Policy::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw DataError("bad checkpoint header: " + path);
  }
  PolicyConfig config;
  config.order = static_cast<int>(read_u64(in));
  config.buckets = read_u64(in);
  const uint64_t updates = read_u64(in);
  const uint64_t n_tokens = read_u64(in);
  std::vector<std::string> tokens;
  tokens.reserve(n_tokens);
  for (uint64_t i = 0; i < n_tokens; ++i) tokens.push_back(read_string(in));
  auto vocab = std::make_shared<Vocabulary>(std::move(tokens));

  Policy policy(vocab, config);
  policy.updates_ = updates;
  const uint64_t n_rows = read_u64(in);
  for (uint64_t i = 0; i < n_rows; ++i) {
    const uint64_t key = read_u64(in);
    std::vector<double> row(static_cast<size_t>(vocab->size()));
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    policy.rows_.emplace(key, std::move(row));
  }
  if (!in) throw DataError("truncated checkpoint: " + path);
  return policy;
}

bool Policy::equal_parameters(const Policy& other) const {
  if (!(config_ == other.config_) || rows_.size() != other.rows_.size()) return false;
  for (const auto& [key, row] : rows_) {
    auto it = other.rows_.find(key);
    if (it == other.rows_.end() || it->second != row) return false;
  }
  return true;
}

std::vector<int> encode_prompt(const Vocabulary& vocab, const std::string& prompt_text) {
  std::vector<int> ids{Vocabulary::kBegin};
  const std::vector<int> body = vocab.tokenize(prompt_text);
  ids.insert(ids.end(), body.begin(), body.end());
  return ids;
}

std::vector<int> encode_continuation(const Vocabulary& vocab, const std::string& text) {
  std::vector<int> ids = vocab.tokenize(text);
  ids.push_back(Vocabulary::kEnd);
  return ids;
}

}  // namespace iris
