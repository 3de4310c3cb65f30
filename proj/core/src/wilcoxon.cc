#include <algorithm>
#include <cmath>
#include <numeric>

#include "toxattack/error.h"
#include "toxattack/eval.h"

namespace toxattack {
namespace {

// Ranks are multiples of one half; work with twice their value.
std::vector<std::int64_t> DoubledRanks(std::span<const double> ranks) {
  std::vector<std::int64_t> doubled;
  doubled.reserve(ranks.size());
  for (double r : ranks) doubled.push_back(std::llround(2.0 * r));
  return doubled;
}

}  // namespace

std::vector<double> SignedRankMagnitudes(std::span<const double> nonzero) {
  const std::size_t n = nonzero.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(nonzero[a]) < std::fabs(nonzero[b]);
  });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    const double magnitude = std::fabs(nonzero[order[i]]);
    while (j < n && std::fabs(nonzero[order[j]]) == magnitude) ++j;
    const double average = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = average;
    i = j;
  }
  return ranks;
}

double WilcoxonExactPValue(std::span<const double> ranks, double statistic) {
  // counts[s]: number of sign assignments whose doubled positive-rank sum is
  // s. Same distribution as enumerating all 2^n assignments.
  const auto doubled = DoubledRanks(ranks);
  const std::int64_t total =
      std::accumulate(doubled.begin(), doubled.end(), std::int64_t{0});
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  std::int64_t reach = 0;
  for (std::int64_t r : doubled) {
    for (std::int64_t s = reach; s >= 0; --s) {
      counts[static_cast<std::size_t>(s + r)] +=
          counts[static_cast<std::size_t>(s)];
    }
    reach += r;
  }
  const std::int64_t observed = std::llround(2.0 * statistic);
  double extreme = 0.0;
  for (std::int64_t s = 0; s <= total; ++s) {
    if (std::min(s, total - s) <= observed) {
      extreme += counts[static_cast<std::size_t>(s)];
    }
  }
  return std::min(1.0, std::ldexp(extreme, -static_cast<int>(ranks.size())));
}

double WilcoxonNormalPValue(std::span<const double> ranks, double statistic) {
  // Under the sign-flip null, W+ has mean sum(r)/2 and variance sum(r^2)/4;
  // with average ranks the latter equals the usual tie-corrected variance
  // n(n+1)(2n+1)/24 - sum(t^3 - t)/48.
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double r : ranks) {
    sum += r;
    sum_sq += r * r;
  }
  const double mean = sum / 2.0;
  const double sd = std::sqrt(sum_sq / 4.0);
  // Continuity correction: W moves in steps of at least one half.
  const double z = std::max(0.0, std::fabs(statistic - mean) - 0.5) / sd;
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

WilcoxonResult WilcoxonSignedRank(
    std::span<const std::pair<double, double>> pairs) {
  std::vector<double> nonzero;
  for (const auto& [first, second] : pairs) {
    const double d = first - second;
    if (!std::isfinite(d)) throw DataError("non-finite paired value");
    if (d != 0.0) nonzero.push_back(d);
  }
  if (nonzero.empty()) {
    throw DataError("all paired differences are zero; the test is undefined");
  }
  const auto ranks = SignedRankMagnitudes(nonzero);
  WilcoxonResult result;
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    (nonzero[i] > 0 ? result.w_plus : result.w_minus) += ranks[i];
  }
  result.statistic = std::min(result.w_plus, result.w_minus);
  result.n_effective = nonzero.size();
  result.exact = result.n_effective <= kWilcoxonExactLimit;
  result.p_two_sided = result.exact
                           ? WilcoxonExactPValue(ranks, result.statistic)
                           : WilcoxonNormalPValue(ranks, result.statistic);
  return result;
}

}  // namespace toxattack
