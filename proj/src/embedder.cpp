#include "iris/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace iris {

namespace {

uint64_t fnv1a(const char* data, size_t len) {
  uint64_t h = 1469598103934665603ULL;
  for (size_t i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::vector<double> TrigramEmbedder::embed(std::string_view text) const {
  std::vector<double> counts(dimension_, 0.0);
  if (text.size() < 3) {
    // Shorter texts than one trigram embed their whole content as one bucket,
    // except the empty text which stays the zero vector.
    if (!text.empty()) {
      counts[fnv1a(text.data(), text.size()) % dimension_] += 1.0;
    }
  } else {
    for (size_t i = 0; i + 3 <= text.size(); ++i) {
      counts[fnv1a(text.data() + i, 3) % dimension_] += 1.0;
    }
  }
  double norm_sq = 0.0;
  for (double c : counts) norm_sq += c * c;
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& c : counts) c *= inv;
  }
  return counts;
}

double cosine_clamped(const std::vector<double>& u, const std::vector<double>& v) {
  if (u.size() != v.size()) return 0.0;
  double dot = 0.0, nu = 0.0, nv = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  if (nu == 0.0 || nv == 0.0) return 0.0;
  const double cos = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(cos, 0.0, 1.0);
}

}  // namespace iris
