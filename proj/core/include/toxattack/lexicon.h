#ifndef TOXATTACK_LEXICON_H_
#define TOXATTACK_LEXICON_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "toxattack/corpus.h"
#include "toxattack/optim.h"

namespace toxattack {

struct LexiconEntry {
  std::string token;
  double coefficient;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

// Tokens ranked by descending (strictly positive) logistic-regression
// coefficient. Immutable once built.
class ToxicLexicon {
 public:
  ToxicLexicon() = default;
  // Throws DataError when coefficients increase, are not > 0, or a token
  // repeats.
  ToxicLexicon(std::vector<LexiconEntry> entries, double l2, std::size_t k);

  bool Contains(std::string_view token) const {
    return members_.count(std::string(token)) != 0;
  }

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // Provenance recorded in the TSV header.
  double l2() const { return l2_; }
  std::size_t k() const { return k_; }

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_set<std::string> members_;
  double l2_ = 0.0;
  std::size_t k_ = 0;
};

inline bool IsToxicToken(const ToxicLexicon& lexicon, std::string_view token) {
  return lexicon.Contains(token);
}

inline constexpr std::size_t kDefaultLexiconSize = 50000;

// The min(k, #positive) tokens with the largest coefficients of a model
// trained on `background`; coefficient ties are broken lexicographically.
ToxicLexicon LexiconFromModel(const LogRegModel& model, std::size_t k,
                              double l2);
ToxicLexicon BuildLexicon(const TokenizedCorpus& background, std::size_t k,
                          const TrainConfig& config);

// `# l2=<val> k=<val>` then `rank<TAB>token<TAB>coefficient` lines.
void SaveLexicon(const ToxicLexicon& lexicon, std::ostream& out);
ToxicLexicon LoadLexicon(std::istream& in);

}  // namespace toxattack

#endif  // TOXATTACK_LEXICON_H_
