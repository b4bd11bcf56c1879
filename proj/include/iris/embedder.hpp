#pragma once

#include <string_view>
#include <vector>

namespace iris {

// Text-embedding interface used by the cosine alignment reward. Stateless and
// deterministic; implementations must be safe to call from many rollout
// workers at once. Empty text embeds to the zero vector.
class Embedder {
public:
  virtual ~Embedder() = default;
  virtual std::vector<double> embed(std::string_view text) const = 0;
  virtual size_t dimension() const = 0;
};

// Default embedder: L2-normalized hashed character-trigram counts. Counts are
// non-negative, so any cosine between two embeddings lands in [0,1] by
// construction, and the scheme is language-agnostic.
class TrigramEmbedder : public Embedder {
public:
  explicit TrigramEmbedder(size_t dimension = 1024) : dimension_(dimension) {}
  std::vector<double> embed(std::string_view text) const override;
  size_t dimension() const override { return dimension_; }

private:
  size_t dimension_;
};

// Cosine of two vectors clamped to [0,1]; 0 when either vector is zero.
double cosine_clamped(const std::vector<double>& u, const std::vector<double>& v);

}  // namespace iris
