#include "toxattack/rng.h"

#include <tuple>

#include "toxattack/text.h"

namespace toxattack {
namespace {

std::uint64_t SplitMix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t Rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// Full 128-bit product as (high, low) words.
std::pair<std::uint64_t, std::uint64_t> Multiply(std::uint64_t a,
                                                 std::uint64_t b) {
  const std::uint64_t a_lo = a & 0xFFFFFFFFULL;
  const std::uint64_t a_hi = a >> 32;
  const std::uint64_t b_lo = b & 0xFFFFFFFFULL;
  const std::uint64_t b_hi = b >> 32;
  const std::uint64_t lo_lo = a_lo * b_lo;
  const std::uint64_t hi_lo = a_hi * b_lo;
  const std::uint64_t lo_hi = a_lo * b_hi;
  const std::uint64_t hi_hi = a_hi * b_hi;
  const std::uint64_t cross = (lo_lo >> 32) + (hi_lo & 0xFFFFFFFFULL) + lo_hi;
  const std::uint64_t high = hi_hi + (hi_lo >> 32) + (cross >> 32);
  const std::uint64_t low = (cross << 32) | (lo_lo & 0xFFFFFFFFULL);
  return {high, low};
}

}  // namespace

DeterministicRng::DeterministicRng(std::uint64_t seed) {
  for (auto& word : state_) word = SplitMix64(seed);
}

std::uint64_t DeterministicRng::NextU64() {
  const std::uint64_t result = Rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = Rotl(state_[3], 45);
  return result;
}

std::uint64_t DeterministicRng::Uniform(std::uint64_t n) {
  auto [high, low] = Multiply(NextU64(), n);
  if (low < n) {
    const std::uint64_t threshold = -n % n;
    while (low < threshold) std::tie(high, low) = Multiply(NextU64(), n);
  }
  return high;
}

double DeterministicRng::UniformReal() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

bool DeterministicRng::Bernoulli(double p) { return UniformReal() < p; }

std::uint64_t StableHash(std::uint64_t seed, std::string_view id) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) {
    bytes[i] = static_cast<char>((seed >> (8 * i)) & 0xFF);
  }
  return Fnv1a(id, Fnv1a(std::string_view(bytes, 8)));
}

}  // namespace toxattack
