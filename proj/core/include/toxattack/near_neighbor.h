#ifndef TOXATTACK_NEAR_NEIGHBOR_H_
#define TOXATTACK_NEAR_NEIGHBOR_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toxattack/optim.h"

namespace toxattack {

// Code-point Levenshtein distance.
std::size_t Levenshtein(std::u32string_view a, std::u32string_view b);

// As above, but gives up and returns `bound + 1` once the distance is known
// to exceed `bound`.
std::size_t BoundedLevenshtein(std::u32string_view a, std::u32string_view b,
                               std::size_t bound);

struct Neighbor {
  std::string token;
  std::size_t distance;
  // distance / max(|query|, |token|), in code points.
  double relative_distance;
};

// Base vocabulary for nearest-neighbor replacement. Candidates are decoded
// once and bucketed by length so the length difference can prune the scan.
class NeighborIndex {
 public:
  NeighborIndex() = default;
  explicit NeighborIndex(const Vocabulary& vocabulary);
  explicit NeighborIndex(std::span<const std::string> tokens);

  // The closest token distinct from `query`; distance ties go to the
  // lexicographically smallest token. nullopt for an empty index (or one
  // holding only `query`).
  std::optional<Neighbor> Nearest(std::string_view query) const;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

 private:
  struct Candidate {
    std::string token;
    std::u32string chars;
  };
  // buckets_[n] holds the candidates of length n, sorted by token.
  std::vector<std::vector<Candidate>> buckets_;
  std::size_t size_ = 0;
};

struct NearNeighborOptions {
  double threshold = 0.75;
  // false: replace iff 1 - relative_distance >= threshold.
  // true:  replace iff relative_distance > threshold.
  bool literal_reading = false;
};

std::string NearNeighborReplace(std::string_view token,
                                const NeighborIndex& base_vocab,
                                const NearNeighborOptions& options);

}  // namespace toxattack

#endif  // TOXATTACK_NEAR_NEIGHBOR_H_
