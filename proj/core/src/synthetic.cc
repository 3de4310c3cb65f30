#include "toxattack/synthetic.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string_view>

#include "toxattack/rng.h"

namespace toxattack {
namespace {

constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m",
                                        "n", "p", "r", "s", "t", "v", "z",
                                        "br", "gr", "st", "tr", "sn", "pl"};
constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u"};
constexpr std::string_view kPunctuation[] = {",", ".", "!", "?"};

template <std::size_t N>
std::string_view Pick(const std::string_view (&items)[N], DeterministicRng& rng) {
  return items[rng.Uniform(N)];
}

std::string PseudoWord(DeterministicRng& rng, std::size_t syllables) {
  std::string word;
  for (std::size_t i = 0; i < syllables; ++i) {
    word += Pick(kOnsets, rng);
    word += Pick(kVowels, rng);
  }
  if (rng.Bernoulli(0.5)) word += Pick(kOnsets, rng).substr(0, 1);
  return word;
}

// One interior letter swapped for another; same length, distance 1.
std::string NearMiss(const std::string& word, DeterministicRng& rng) {
  std::string twin = word;
  const std::size_t at = 1 + rng.Uniform(word.size() - 2);
  char replacement;
  do {
    replacement = static_cast<char>('a' + rng.Uniform(26));
  } while (replacement == word[at]);
  twin[at] = replacement;
  return twin;
}

class ZipfSampler {
 public:
  explicit ZipfSampler(std::size_t n) : cumulative_(n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += 1.0 / std::pow(static_cast<double>(i + 1), 0.9);
      cumulative_[i] = total;
    }
  }
  std::size_t Sample(DeterministicRng& rng) const {
    const double u = rng.UniformReal() * cumulative_.back();
    return static_cast<std::size_t>(
        std::upper_bound(cumulative_.begin(), cumulative_.end(), u) -
        cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

std::string Render(const std::vector<std::string>& words,
                   DeterministicRng& rng) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string word = words[i];
    if (i == 0 || rng.Bernoulli(0.03)) {
      word[0] = static_cast<char>(word[0] - 'a' + 'A');
    }
    if (rng.Bernoulli(0.01)) {
      // Elongation that preprocessing collapses again.
      const std::size_t at = rng.Uniform(word.size());
      word.insert(at, 4, word[at]);
    }
    if (!text.empty()) text += ' ';
    text += word;
    if (rng.Bernoulli(0.08)) text += Pick(kPunctuation, rng);
  }
  if (rng.Bernoulli(0.02)) text += " http://example.com/x";
  return text;
}

}  // namespace

SyntheticBenchmark GenerateSyntheticBenchmark(const SyntheticRecipe& recipe) {
  DeterministicRng rng(recipe.seed);
  SyntheticBenchmark bench;

  std::set<std::string> used;
  const auto fresh = [&](std::size_t syllables) {
    while (true) {
      std::string w = PseudoWord(rng, syllables);
      if (used.insert(w).second) return w;
    }
  };
  for (std::size_t i = 0; i < recipe.toxic_words; ++i) {
    bench.toxic_words.push_back(fresh(recipe.toxic_syllables));
  }
  for (std::size_t i = 0; i < recipe.neutral_words; ++i) {
    bench.neutral_words.push_back(fresh(1 + rng.Uniform(3)));
  }
  for (const auto& toxic : bench.toxic_words) {
    if (!rng.Bernoulli(recipe.near_miss_rate)) continue;
    std::string twin = NearMiss(toxic, rng);
    if (used.insert(twin).second) {
      // Inserted at a random rank so the twins vary in frequency.
      const std::size_t at = rng.Uniform(bench.neutral_words.size() + 1);
      bench.neutral_words.insert(bench.neutral_words.begin() + at, twin);
    }
  }

  const ZipfSampler neutral(bench.neutral_words.size());
  const ZipfSampler toxic(bench.toxic_words.size());

  const auto make = [&](Corpus& corpus, std::string_view prefix,
                        std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const bool is_toxic = rng.Bernoulli(recipe.toxic_rate);
      const std::size_t length =
          recipe.min_length +
          rng.Uniform(recipe.max_length - recipe.min_length + 1);
      std::vector<std::string> words;
      for (std::size_t j = 0; j < length; ++j) {
        words.push_back(bench.neutral_words[neutral.Sample(rng)]);
      }
      std::size_t planted = 0;
      if (is_toxic && !rng.Bernoulli(recipe.label_noise)) {
        planted = 1 + rng.Uniform(2) + (rng.Bernoulli(0.2) ? 1 : 0);
      } else if (!is_toxic && rng.Bernoulli(recipe.label_noise)) {
        planted = 1;
      }
      for (std::size_t j = 0; j < planted; ++j) {
        const std::size_t at = rng.Uniform(words.size() + 1);
        words.insert(words.begin() + at, bench.toxic_words[toxic.Sample(rng)]);
      }
      // Annotator fraction out of ten raters.
      const double toxicity =
          is_toxic ? static_cast<double>(5 + rng.Uniform(6)) / 10.0
                   : static_cast<double>(rng.Uniform(5)) / 10.0;
      corpus.Add({std::string(prefix) + std::to_string(i), Render(words, rng),
                  toxicity});
    }
  };
  make(bench.background, "bg-", recipe.background_size);
  make(bench.train, "train-", recipe.train_size);
  make(bench.test, "test-", recipe.test_size);
  return bench;
}

}  // namespace toxattack
