#ifndef TOXATTACK_RNG_H_
#define TOXATTACK_RNG_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>

namespace toxattack {

// xoshiro256** seeded through splitmix64. The draw helpers below are defined
// in terms of raw 64-bit outputs only (no <random> distributions), so a seed
// yields the same sequence on every platform and standard library.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed);

  std::uint64_t NextU64();

  // Uniform integer in [0, n). Requires n > 0. Unbiased (Lemire's method).
  std::uint64_t Uniform(std::uint64_t n);

  // Uniform real in [0, 1) with 53 bits of precision.
  double UniformReal();

  // true with probability p; p <= 0 never, p >= 1 always.
  bool Bernoulli(double p);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(Uniform(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::array<std::uint64_t, 4> state_;
};

// FNV-1a over the 8 little-endian bytes of `seed` followed by the id bytes.
std::uint64_t StableHash(std::uint64_t seed, std::string_view id);

}  // namespace toxattack

#endif  // TOXATTACK_RNG_H_
