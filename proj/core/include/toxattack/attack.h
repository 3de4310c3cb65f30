#ifndef TOXATTACK_ATTACK_H_
#define TOXATTACK_ATTACK_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "toxattack/confusion_map.h"
#include "toxattack/corpus.h"
#include "toxattack/key_value.h"
#include "toxattack/lexicon.h"
#include "toxattack/near_neighbor.h"
#include "toxattack/rng.h"

namespace toxattack {

enum class PerturbOp { kScramble, kHomoglyph, kNearNeighbor };

std::string_view ToString(PerturbOp op);

// Which runs are appended by distractor injection.
enum class DistractorParts { kBoth, kLonger };

// Noise settings in experiment-table notation: none, c, d, c+d.
enum class NoiseSetting { kNone, kC, kD, kCD };

NoiseSetting ParseNoiseSetting(std::string_view text);
std::string_view ToString(NoiseSetting setting);

struct AttackConfig {
  std::uint64_t master_seed = 0;
  // Kept in canonical order (scramble, homoglyph, near_neighbor).
  std::vector<PerturbOp> enabled_ops = {PerturbOp::kScramble,
                                        PerturbOp::kHomoglyph,
                                        PerturbOp::kNearNeighbor};
  double homoglyph_char_prob = 0.2;
  double nn_similarity_threshold = 0.75;
  bool nn_literal_reading = false;
  bool obfuscation_enabled = true;
  bool distractors_enabled = true;
  DistractorParts distractor_parts = DistractorParts::kBoth;

  void Validate() const;
  void ApplyNoiseSetting(NoiseSetting setting);

  // Keys mirror the field names; enabled_ops is a comma list and
  // distractor_parts is `both` or `longer`. Unset keys keep their defaults.
  static AttackConfig FromKeyValues(const KeyValues& kv);
  static std::span<const std::string_view> Keys();
  void Write(std::ostream& out) const;
};

// Interior characters (all but first and last) are permuted in consecutive
// groups of three, each group independently and uniformly. Tokens shorter
// than three characters are returned unchanged.
std::string Scramble(std::string_view token, DeterministicRng& rng);

// Every character is independently selected with probability p; a selected
// character with map entries is replaced by one of them chosen uniformly.
std::string HomoglyphSubstitute(std::string_view token,
                                const ConfusionMap& map, double p,
                                DeterministicRng& rng);

// A maximal-length run of non-toxic tokens: [start, start + length).
struct TokenRun {
  std::size_t start = 0;
  std::size_t length = 0;
};

// For the split at `split` (1 <= split < toxic.size()), the longest run of
// non-toxic positions whose start lies in [0, split) and in
// [split, size) respectively. Runs may cross the split; the earliest start
// wins ties; length 0 means the part has no non-toxic token.
std::array<TokenRun, 2> FindDistractorRuns(std::span<const bool> toxic,
                                           std::size_t split);

// Splits at a uniform position in [1, T-1] and appends the distractor runs.
// `toxic[i]` tells whether tokens[i] is (originally) a lexicon token.
// Sequences shorter than two tokens are returned unchanged without drawing.
std::vector<std::string> InjectDistractors(
    std::span<const std::string> tokens, std::span<const bool> toxic,
    DeterministicRng& rng, DistractorParts parts = DistractorParts::kBoth);

std::vector<std::string> InjectDistractors(
    std::span<const std::string> tokens, const ToxicLexicon& lexicon,
    DeterministicRng& rng, DistractorParts parts = DistractorParts::kBoth);

// Token obfuscation and distractor injection against one lexicon. The
// referenced lexicon, index and map must outlive the Attack.
class Attack {
 public:
  Attack(AttackConfig config, const ToxicLexicon& lexicon,
         const NeighborIndex& base_vocab, const ConfusionMap& map);

  // Picks one enabled op uniformly (no draw when only one is enabled) and
  // applies it.
  std::string PerturbToken(std::string_view token, DeterministicRng& rng) const;
  std::string ApplyOp(PerturbOp op, std::string_view token,
                      DeterministicRng& rng) const;

  TokenizedUtterance NoiseUtterance(const TokenizedUtterance& utterance,
                                    DeterministicRng& rng) const;

  // Each utterance uses DeterministicRng(StableHash(master_seed, id)), so the
  // output for an utterance does not depend on corpus order or `threads`.
  // threads == 0 picks the hardware concurrency.
  TokenizedCorpus NoiseCorpus(const TokenizedCorpus& corpus,
                              unsigned threads = 1) const;

  const AttackConfig& config() const { return config_; }
  const ToxicLexicon& lexicon() const { return lexicon_; }

 private:
  AttackConfig config_;
  const ToxicLexicon& lexicon_;
  const NeighborIndex& base_vocab_;
  const ConfusionMap& map_;
};

// Default near-neighbor vocabulary: background vocabulary minus the lexicon.
std::vector<std::string> BaseVocabularyTokens(const Vocabulary& background,
                                              const ToxicLexicon& lexicon);

inline constexpr std::string_view kMaskToken = "<mask>";

struct DenoiserPair {
  std::vector<std::string> noised;
  std::vector<std::string> clean;
};

struct DenoiserStats {
  std::size_t tokens = 0;
  // Tokens passed through PerturbToken (the output may still equal the input).
  std::size_t perturbed = 0;
  std::size_t masked = 0;
  std::size_t perturbed_or_masked = 0;
  // Tokens whose noised form differs from the clean one.
  std::size_t changed = 0;
};

struct DenoiserOptions {
  double noise_rate = 0.7;
  double mask_rate = 0.1;
};

// Every token is independently perturbed with probability noise_rate (using
// the attack's enabled character-level ops, never distractors), then
// independently masked with probability mask_rate. Pairs stay token-aligned.
std::vector<DenoiserPair> GenerateDenoiserPairs(
    const TokenizedCorpus& corpus, const DenoiserOptions& options,
    const Attack& attack, DeterministicRng& rng,
    DenoiserStats* stats = nullptr);

}  // namespace toxattack

#endif  // TOXATTACK_ATTACK_H_
