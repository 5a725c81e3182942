#ifndef RELX_FEATURES_HPP
#define RELX_FEATURES_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace relx {

inline constexpr std::uint64_t kDefaultHashSeed = 0x5245'4c58'2023'0001ULL;

struct HashingConfig {
  std::uint8_t max_order = 2;  // n-gram orders 1..max_order
  std::uint32_t buckets = 1u << 18;
  std::uint64_t seed = kDefaultHashSeed;

  bool operator==(const HashingConfig&) const = default;
};

// Sorted, duplicate-free bucket indices with their values.
struct SparseFeatures {
  std::vector<std::uint32_t> index;
  std::vector<double> value;

  bool operator==(const SparseFeatures&) const = default;
};

// 64-bit FNV-1a with the offset basis mixed with `seed`.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed);

// Hashed counts of whitespace-token n-grams, scaled to unit L2 norm. Empty
// text yields an empty vector.
SparseFeatures featurize(std::string_view text, const HashingConfig& config);

}  // namespace relx

#endif  // RELX_FEATURES_HPP
