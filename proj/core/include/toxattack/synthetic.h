#ifndef TOXATTACK_SYNTHETIC_H_
#define TOXATTACK_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "toxattack/corpus.h"

namespace toxattack {

// Recipe for a synthetic toxicity benchmark with a planted toxic vocabulary.
// Words are pronounceable pseudo-words; toxic utterances carry one to three
// planted toxic words among Zipf-distributed neutral words. A fraction of the
// planted words get a one-letter "near miss" twin in the neutral vocabulary,
// so edit-distance replacement has innocuous targets to land on.
struct SyntheticRecipe {
  std::uint64_t seed = 2019;
  std::size_t background_size = 4000;
  std::size_t train_size = 2000;
  std::size_t test_size = 500;
  std::size_t neutral_words = 900;
  std::size_t toxic_words = 20;
  std::size_t toxic_syllables = 3;
  double toxic_rate = 0.3;
  // Share of toxic utterances with no planted word, and of non-toxic ones
  // with one; keeps the task from being perfectly separable.
  double label_noise = 0.04;
  double near_miss_rate = 0.5;
  std::size_t min_length = 6;
  std::size_t max_length = 18;
};

struct SyntheticBenchmark {
  Corpus background;
  Corpus train;
  Corpus test;
  std::vector<std::string> toxic_words;
  std::vector<std::string> neutral_words;
};

// Deterministic in the recipe. Ids are prefixed "bg-", "train-" and "test-"
// so the three corpora are disjoint.
SyntheticBenchmark GenerateSyntheticBenchmark(const SyntheticRecipe& recipe);

}  // namespace toxattack

#endif  // TOXATTACK_SYNTHETIC_H_
