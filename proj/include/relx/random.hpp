#ifndef RELX_RANDOM_HPP
#define RELX_RANDOM_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace relx {

// std::mt19937_64 output is fully specified by the standard, but the
// standard distributions and std::shuffle are not. These helpers keep
// seeded runs identical across standard library implementations.

// Uniform integer in [0, bound); bound must be positive.
inline std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = engine();
  while (draw >= limit) draw = engine();
  return draw % bound;
}

// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform_unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, std::mt19937_64& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(engine, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace relx

#endif  // RELX_RANDOM_HPP
