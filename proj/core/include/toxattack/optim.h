#ifndef TOXATTACK_OPTIM_H_
#define TOXATTACK_OPTIM_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "toxattack/corpus.h"
#include "toxattack/key_value.h"

namespace toxattack {

// Bijection token <-> dense feature index, with document frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Tokens are sorted lexicographically (byte order) and deduplicated, so
  // index assignment does not depend on the input order.
  static Vocabulary FromTokens(std::vector<std::string> tokens);

  std::optional<std::uint32_t> Find(std::string_view token) const;
  const std::string& Token(std::uint32_t index) const {
    return tokens_[index];
  }
  // 0 for vocabularies not built from a corpus.
  std::uint32_t DocumentFrequency(std::uint32_t index) const {
    return doc_freq_.empty() ? 0 : doc_freq_[index];
  }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  friend Vocabulary BuildVocabulary(
      std::span<const std::vector<std::string>> docs, int min_df);

  std::vector<std::string> tokens_;
  std::vector<std::uint32_t> doc_freq_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Keeps exactly the tokens with document frequency >= min_df.
Vocabulary BuildVocabulary(std::span<const std::vector<std::string>> docs,
                           int min_df);
Vocabulary BuildVocabulary(const TokenizedCorpus& corpus, int min_df);

// Strictly increasing indices, no stored zeros.
class SparseVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  SparseVector() = default;
  // Throws DataError if the invariants do not hold.
  static SparseVector FromSorted(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double Sum() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::vector<Entry> entries_;
};

// Bag-of-words counts; out-of-vocabulary tokens are dropped.
SparseVector Featurize(std::span<const std::string> tokens,
                       const Vocabulary& vocabulary);

struct LabeledVector {
  SparseVector features;
  Label label;
};

std::vector<LabeledVector> FeaturizeCorpus(const TokenizedCorpus& corpus,
                                           const Vocabulary& vocabulary);

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 10;
  double l2 = 1e-6;
  int batch_size = 256;
  std::uint64_t seed = 0;
  // Used when a vocabulary is built for training.
  int min_df = 2;

  // Throws DataError naming the offending field.
  void Validate() const;

  // Reads learning_rate, epochs, l2, batch_size, train_seed and min_df.
  static TrainConfig FromKeyValues(const KeyValues& kv);
  static std::span<const std::string_view> Keys();
  // `key = value` lines readable by FromKeyValues.
  void Write(std::ostream& out) const;
};

double Sigmoid(double z);

class LogRegModel {
 public:
  LogRegModel() = default;
  // Zero weights and bias.
  explicit LogRegModel(Vocabulary vocabulary);
  // Throws DataError unless weights.size() == vocabulary.size() and every
  // value is finite.
  LogRegModel(Vocabulary vocabulary, std::vector<double> weights, double bias);

  // w.x + b. Throws DataError for a feature index outside the vocabulary.
  double Margin(const SparseVector& features) const;
  double PredictProba(const SparseVector& features) const {
    return Sigmoid(Margin(features));
  }
  double PredictTokens(std::span<const std::string> tokens) const {
    return PredictProba(Featurize(tokens, vocabulary_));
  }

  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  std::optional<double> Weight(std::string_view token) const;

  std::vector<double>& mutable_weights() { return weights_; }
  void set_bias(double bias) { bias_ = bias; }

 private:
  Vocabulary vocabulary_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> weight_gradient;
  double bias_gradient = 0.0;
};

// Mean log-loss plus l2 * ||w||^2 (bias unregularized) and its exact
// gradient. Requires a non-empty batch.
LossAndGradient ComputeLossAndGradient(const LogRegModel& model,
                                       std::span<const LabeledVector> batch,
                                       double l2);

// Deterministic mini-batch gradient descent. Example order is reshuffled
// every epoch from `config.seed`. Throws DataError if the dataset is empty or
// has a single class.
LogRegModel TrainLogReg(std::span<const LabeledVector> dataset,
                        Vocabulary vocabulary, const TrainConfig& config);

// Vocabulary (min_df from config) + featurize + train. Unlabeled utterances
// are rejected.
LogRegModel TrainOnCorpus(const TokenizedCorpus& corpus,
                          const TrainConfig& config);

// JSON: {"bias", "weights": {token: w}, "config": {...}} plus an optional
// "threshold" chosen on training predictions.
struct SavedModel {
  LogRegModel model;
  TrainConfig config;
  std::optional<double> threshold;
};

void SaveModel(const SavedModel& saved, std::ostream& out);
SavedModel LoadModel(std::istream& in);

}  // namespace toxattack

#endif  // TOXATTACK_OPTIM_H_
