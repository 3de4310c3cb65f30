// Randomized property and oracle suites shared by the unit tests (small trial
// counts) and the acceptance runner (full counts).
#ifndef TOXATTACK_TESTS_CHECKS_H_
#define TOXATTACK_TESTS_CHECKS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

namespace toxattack::checks {

struct Tally {
  std::size_t trials = 0;
  std::size_t violations = 0;
  // First few failure descriptions, for diagnostics.
  std::string first_failure;

  void Record(bool ok, const std::string& what);
  bool ok() const { return trials > 0 && violations == 0; }
};

// Keyed by invariant name: scramble_anagram, scramble_endpoints,
// homoglyph_length, homoglyph_identity, nn_bound, distractor_contiguity,
// distractor_nontoxic, distractor_prefix, determinism.
std::map<std::string, Tally> AttackInvariants(std::size_t trials,
                                              std::uint64_t seed);

// Rank-formula AUC vs pair counting; worst absolute difference in `max_error`.
Tally AucOracle(std::size_t instances, std::uint64_t seed, double tolerance,
                double* max_error = nullptr);
Tally ThresholdOracle(std::size_t instances, std::uint64_t seed);
Tally WilcoxonExactOracle(std::size_t instances, std::uint64_t seed,
                          std::size_t max_n);
// |normal p - exact p| at n = 20 over random continuous differences.
Tally WilcoxonNormalAgreement(std::size_t instances, std::uint64_t seed,
                              double tolerance, double* max_gap = nullptr);
Tally GradientCheck(std::size_t instances, std::uint64_t seed,
                    double tolerance, double* max_error = nullptr);

}  // namespace toxattack::checks

#endif  // TOXATTACK_TESTS_CHECKS_H_
