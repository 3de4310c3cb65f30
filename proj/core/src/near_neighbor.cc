#include "toxattack/near_neighbor.h"

#include <algorithm>
#include <numeric>

#include "toxattack/text.h"

namespace toxattack {

std::size_t Levenshtein(std::u32string_view a, std::u32string_view b) {
  return BoundedLevenshtein(a, b, std::max(a.size(), b.size()));
}

std::size_t BoundedLevenshtein(std::u32string_view a, std::u32string_view b,
                               std::size_t bound) {
  if (a.size() < b.size()) std::swap(a, b);
  if (a.size() - b.size() > bound) return bound + 1;
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    std::size_t row_min = row[0];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t substitution = diagonal + (a[i - 1] != b[j - 1]);
      row[j] = std::min({up + 1, row[j - 1] + 1, substitution});
      diagonal = up;
      row_min = std::min(row_min, row[j]);
    }
    if (row_min > bound) return bound + 1;
  }
  return std::min(row[b.size()], bound + 1);
}

NeighborIndex::NeighborIndex(const Vocabulary& vocabulary)
    : NeighborIndex(std::span<const std::string>(vocabulary.tokens())) {}

NeighborIndex::NeighborIndex(std::span<const std::string> tokens) {
  std::vector<std::string> sorted(tokens.begin(), tokens.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto& token : sorted) {
    std::u32string chars = DecodeUtf8(token);
    if (chars.size() >= buckets_.size()) buckets_.resize(chars.size() + 1);
    buckets_[chars.size()].push_back({std::move(token), std::move(chars)});
  }
  size_ = sorted.size();
}

std::optional<Neighbor> NeighborIndex::Nearest(std::string_view query) const {
  const std::u32string q = DecodeUtf8(query);
  const Candidate* best = nullptr;
  std::size_t best_distance = 0;

  // Visit lengths in order of |len - |q||; a bucket whose length difference
  // already exceeds the best distance cannot contain a closer (or tied)
  // candidate.
  const std::size_t max_len = buckets_.empty() ? 0 : buckets_.size() - 1;
  const std::size_t span = std::max(q.size(), max_len);
  for (std::size_t delta = 0; delta <= span; ++delta) {
    if (best != nullptr && delta > best_distance) break;
    for (int side = 0; side < (delta == 0 ? 1 : 2); ++side) {
      if (side == 0 && q.size() + delta > max_len) continue;
      if (side == 1 && delta > q.size()) continue;
      const std::size_t len = side == 0 ? q.size() + delta : q.size() - delta;
      if (len >= buckets_.size()) continue;
      for (const Candidate& c : buckets_[len]) {
        if (c.chars == q) continue;
        const std::size_t bound =
            best == nullptr ? std::max(q.size(), len) : best_distance;
        const std::size_t d = BoundedLevenshtein(q, c.chars, bound);
        if (d > bound) continue;
        if (best == nullptr || d < best_distance ||
            (d == best_distance && c.token < best->token)) {
          best = &c;
          best_distance = d;
        }
      }
    }
  }
  if (best == nullptr) return std::nullopt;
  const double longest = static_cast<double>(
      std::max(q.size(), best->chars.size()));
  return Neighbor{best->token, best_distance,
                  static_cast<double>(best_distance) / longest};
}

std::string NearNeighborReplace(std::string_view token,
                                const NeighborIndex& base_vocab,
                                const NearNeighborOptions& options) {
  const auto neighbor = base_vocab.Nearest(token);
  if (!neighbor) return std::string(token);
  const bool replace =
      options.literal_reading
          ? neighbor->relative_distance > options.threshold
          : 1.0 - neighbor->relative_distance >= options.threshold;
  return replace ? neighbor->token : std::string(token);
}

}  // namespace toxattack
