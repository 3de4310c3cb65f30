#include "toxattack/optim.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "json.hpp"
#include "toxattack/error.h"
#include "toxattack/rng.h"
#include "toxattack/text.h"

namespace toxattack {
namespace {

// log(1 + e^x) without overflow.
double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

constexpr std::string_view kTrainConfigKeys[] = {
    "learning_rate", "epochs", "l2", "batch_size", "train_seed", "min_df",
};

}  // namespace

Vocabulary Vocabulary::FromTokens(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.index_.reserve(v.tokens_.size());
  for (std::uint32_t i = 0; i < v.tokens_.size(); ++i) {
    v.index_.emplace(v.tokens_[i], i);
  }
  return v;
}

std::optional<std::uint32_t> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary BuildVocabulary(std::span<const std::vector<std::string>> docs,
                           int min_df) {
  if (min_df < 1) throw DataError("min_df must be >= 1");
  std::map<std::string, std::uint32_t> df;
  std::vector<std::string> seen;
  for (const auto& doc : docs) {
    seen.assign(doc.begin(), doc.end());
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    for (auto& token : seen) ++df[token];
  }
  std::vector<std::string> kept;
  std::vector<std::uint32_t> kept_df;
  for (auto& [token, count] : df) {
    if (count >= static_cast<std::uint32_t>(min_df)) {
      kept.push_back(token);
      kept_df.push_back(count);
    }
  }
  Vocabulary v = Vocabulary::FromTokens(std::move(kept));
  v.doc_freq_ = std::move(kept_df);
  return v;
}

Vocabulary BuildVocabulary(const TokenizedCorpus& corpus, int min_df) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  for (const auto& u : corpus) docs.push_back(u.tokens);
  return BuildVocabulary(docs, min_df);
}

SparseVector SparseVector::FromSorted(std::vector<Entry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].second == 0.0) {
      throw DataError("sparse vector stores an explicit zero");
    }
    if (i > 0 && entries[i].first <= entries[i - 1].first) {
      throw DataError("sparse vector indices not strictly increasing");
    }
  }
  SparseVector v;
  v.entries_ = std::move(entries);
  return v;
}

double SparseVector::Sum() const {
  double total = 0.0;
  for (const auto& [index, value] : entries_) total += value;
  return total;
}

SparseVector Featurize(std::span<const std::string> tokens,
                       const Vocabulary& vocabulary) {
  std::vector<std::uint32_t> indices;
  indices.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (auto index = vocabulary.Find(token)) indices.push_back(*index);
  }
  std::sort(indices.begin(), indices.end());
  std::vector<SparseVector::Entry> entries;
  for (std::size_t i = 0; i < indices.size();) {
    std::size_t j = i;
    while (j < indices.size() && indices[j] == indices[i]) ++j;
    entries.emplace_back(indices[i], static_cast<double>(j - i));
    i = j;
  }
  return SparseVector::FromSorted(std::move(entries));
}

std::vector<LabeledVector> FeaturizeCorpus(const TokenizedCorpus& corpus,
                                           const Vocabulary& vocabulary) {
  std::vector<LabeledVector> out;
  out.reserve(corpus.size());
  for (const auto& u : corpus) {
    if (!u.label) {
      throw DataError("utterance '" + u.id + "' has no label");
    }
    out.push_back({Featurize(u.tokens, vocabulary), *u.label});
  }
  return out;
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw DataError("learning_rate must be > 0");
  }
  if (epochs < 0) throw DataError("epochs must be >= 0");
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw DataError("l2 must be >= 0");
  if (batch_size < 1) throw DataError("batch_size must be >= 1");
  if (min_df < 1) throw DataError("min_df must be >= 1");
}

std::span<const std::string_view> TrainConfig::Keys() {
  return kTrainConfigKeys;
}

void TrainConfig::Write(std::ostream& out) const {
  out << "learning_rate = " << FormatDouble(learning_rate) << "\n"
      << "epochs = " << epochs << "\n"
      << "l2 = " << FormatDouble(l2) << "\n"
      << "batch_size = " << batch_size << "\n"
      << "train_seed = " << seed << "\n"
      << "min_df = " << min_df << "\n";
}

TrainConfig TrainConfig::FromKeyValues(const KeyValues& kv) {
  TrainConfig c;
  c.learning_rate = kv.GetDouble("learning_rate", c.learning_rate);
  c.epochs = static_cast<int>(kv.GetInt("epochs", c.epochs));
  c.l2 = kv.GetDouble("l2", c.l2);
  c.batch_size = static_cast<int>(kv.GetInt("batch_size", c.batch_size));
  c.seed = kv.GetUint64("train_seed", c.seed);
  c.min_df = static_cast<int>(kv.GetInt("min_df", c.min_df));
  c.Validate();
  return c;
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LogRegModel::LogRegModel(Vocabulary vocabulary)
    : vocabulary_(std::move(vocabulary)),
      weights_(vocabulary_.size(), 0.0) {}

LogRegModel::LogRegModel(Vocabulary vocabulary, std::vector<double> weights,
                         double bias)
    : vocabulary_(std::move(vocabulary)),
      weights_(std::move(weights)),
      bias_(bias) {
  if (weights_.size() != vocabulary_.size()) {
    throw DataError("weight count " + std::to_string(weights_.size()) +
                    " does not match vocabulary size " +
                    std::to_string(vocabulary_.size()));
  }
  if (!std::isfinite(bias_) ||
      !std::all_of(weights_.begin(), weights_.end(),
                   [](double w) { return std::isfinite(w); })) {
    throw DataError("model contains a non-finite value");
  }
}

double LogRegModel::Margin(const SparseVector& features) const {
  double z = bias_;
  for (const auto& [index, value] : features.entries()) {
    if (index >= weights_.size()) {
      throw DataError("feature index " + std::to_string(index) +
                      " out of range for vocabulary of size " +
                      std::to_string(weights_.size()));
    }
    z += weights_[index] * value;
  }
  return z;
}

std::optional<double> LogRegModel::Weight(std::string_view token) const {
  if (auto index = vocabulary_.Find(token)) return weights_[*index];
  return std::nullopt;
}

LossAndGradient ComputeLossAndGradient(const LogRegModel& model,
                                       std::span<const LabeledVector> batch,
                                       double l2) {
  if (batch.empty()) throw DataError("empty batch");
  const auto& w = model.weights();
  LossAndGradient out;
  out.weight_gradient.assign(w.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  for (const auto& example : batch) {
    const double z = model.Margin(example.features);
    const double y = example.label == Label::kToxic ? 1.0 : 0.0;
    // -[y ln s(z) + (1-y) ln(1-s(z))] = y softplus(-z) + (1-y) softplus(z)
    out.loss += y * Softplus(-z) + (1.0 - y) * Softplus(z);
    const double residual = Sigmoid(z) - y;
    out.bias_gradient += residual;
    for (const auto& [index, value] : example.features.entries()) {
      out.weight_gradient[index] += residual * value;
    }
  }
  out.loss *= inv_n;
  out.bias_gradient *= inv_n;
  double norm2 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    out.weight_gradient[i] = out.weight_gradient[i] * inv_n + 2.0 * l2 * w[i];
    norm2 += w[i] * w[i];
  }
  out.loss += l2 * norm2;
  return out;
}

LogRegModel TrainLogReg(std::span<const LabeledVector> dataset,
                        Vocabulary vocabulary, const TrainConfig& config) {
  config.Validate();
  if (dataset.empty()) throw DataError("training set is empty");
  const auto positives = std::count_if(
      dataset.begin(), dataset.end(),
      [](const LabeledVector& e) { return e.label == Label::kToxic; });
  if (positives == 0 || positives == static_cast<long>(dataset.size())) {
    throw DataError("training set contains a single class");
  }

  LogRegModel model(std::move(vocabulary));
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  DeterministicRng rng(config.seed);
  std::vector<LabeledVector> batch;
  batch.reserve(static_cast<std::size_t>(config.batch_size));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(dataset[order[i]]);
      }
      const LossAndGradient g = ComputeLossAndGradient(model, batch, config.l2);
      auto& w = model.mutable_weights();
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] -= config.learning_rate * g.weight_gradient[i];
      }
      model.set_bias(model.bias() - config.learning_rate * g.bias_gradient);
    }
  }
  return model;
}

LogRegModel TrainOnCorpus(const TokenizedCorpus& corpus,
                          const TrainConfig& config) {
  config.Validate();
  Vocabulary vocabulary = BuildVocabulary(corpus, config.min_df);
  const auto data = FeaturizeCorpus(corpus, vocabulary);
  return TrainLogReg(data, std::move(vocabulary), config);
}

void SaveModel(const SavedModel& saved, std::ostream& out) {
  using nlohmann::ordered_json;
  ordered_json weights = ordered_json::object();
  const auto& vocab = saved.model.vocabulary();
  for (std::uint32_t i = 0; i < vocab.size(); ++i) {
    weights[vocab.Token(i)] = saved.model.weights()[i];
  }
  const TrainConfig& c = saved.config;
  ordered_json doc;
  doc["bias"] = saved.model.bias();
  doc["weights"] = std::move(weights);
  doc["config"] = {{"learning_rate", c.learning_rate},
                   {"epochs", c.epochs},
                   {"l2", c.l2},
                   {"batch_size", c.batch_size},
                   {"seed", c.seed},
                   {"min_df", c.min_df}};
  if (saved.threshold) doc["threshold"] = *saved.threshold;
  out << doc.dump(1) << '\n';
}

SavedModel LoadModel(std::istream& in) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: invalid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || !doc.contains("bias") ||
        !doc.contains("weights") || !doc["weights"].is_object()) {
      throw DataError("model file: expected {\"bias\", \"weights\", ...}");
    }
    std::vector<std::string> tokens;
    for (auto& [token, value] : doc["weights"].items()) tokens.push_back(token);
    Vocabulary vocab = Vocabulary::FromTokens(tokens);
    std::vector<double> weights(vocab.size());
    for (auto& [token, value] : doc["weights"].items()) {
      weights[*vocab.Find(token)] = value.get<double>();
    }
    SavedModel saved{LogRegModel(std::move(vocab), std::move(weights),
                                 doc["bias"].get<double>()),
                     TrainConfig{}, std::nullopt};
    if (doc.contains("config")) {
      const auto& c = doc["config"];
      saved.config.learning_rate =
          c.value("learning_rate", saved.config.learning_rate);
      saved.config.epochs = c.value("epochs", saved.config.epochs);
      saved.config.l2 = c.value("l2", saved.config.l2);
      saved.config.batch_size = c.value("batch_size", saved.config.batch_size);
      saved.config.seed = c.value("seed", saved.config.seed);
      saved.config.min_df = c.value("min_df", saved.config.min_df);
    }
    if (doc.contains("threshold")) {
      saved.threshold = doc["threshold"].get<double>();
    }
    return saved;
  } catch (const json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

}  // namespace toxattack
