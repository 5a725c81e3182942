#include "relx/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace relx {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t hash = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  return tokens;
}

}  // namespace

SparseFeatures featurize(std::string_view text, const HashingConfig& config) {
  const auto tokens = tokenize(text);
  std::vector<std::uint32_t> hits;
  std::string key;
  for (std::size_t order = 1; order <= config.max_order; ++order) {
    // Tokens contain no whitespace, so joining with ' ' is unambiguous.
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      key.assign(tokens[i]);
      for (std::size_t k = 1; k < order; ++k) {
        key += ' ';
        key += tokens[i + k];
      }
      const std::uint64_t h = fnv1a64(key, config.seed + order);
      hits.push_back(static_cast<std::uint32_t>(h % config.buckets));
    }
  }
  std::sort(hits.begin(), hits.end());

  SparseFeatures out;
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    out.index.push_back(hits[i]);
    out.value.push_back(static_cast<double>(j - i));
    i = j;
  }
  double norm = 0.0;
  for (double v : out.value) norm += v * v;
  norm = std::sqrt(norm);
  if (norm > 0) {
    for (double& v : out.value) v /= norm;
  }
  return out;
}

}  // namespace relx
