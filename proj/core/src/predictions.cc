#include <algorithm>

#include "toxattack/csv.h"
#include "toxattack/error.h"
#include "toxattack/eval.h"
#include "toxattack/text.h"

namespace toxattack {

void PredictionSet::Add(std::string id, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw DataError("score " + FormatDouble(score) + " for id '" + id +
                    "' outside [0, 1]");
  }
  if (id.empty()) throw DataError("empty prediction id");
  if (!index_.emplace(id, entries_.size()).second) {
    throw DataError("duplicate prediction id '" + id + "'");
  }
  entries_.emplace_back(std::move(id), score);
}

std::optional<double> PredictionSet::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].second;
}

PredictionSet LoadPredictions(std::istream& in) {
  PredictionSet predictions;
  CsvReader reader(in);
  CsvRecord record;
  if (!reader.Next(record)) throw DataError("missing header 'id,score'", 1);
  if (record.fields.size() != 2 || record.fields[0] != "id" ||
      record.fields[1] != "score") {
    throw DataError("expected header 'id,score'", record.line);
  }
  while (reader.Next(record)) {
    if (record.fields.size() != 2) {
      throw DataError("expected 2 fields, found " +
                          std::to_string(record.fields.size()),
                      record.line);
    }
    try {
      predictions.Add(record.fields[0],
                      ParseDouble(record.fields[1], "score"));
    } catch (const DataError& e) {
      throw DataError(e.what(), record.line);
    }
  }
  return predictions;
}

void SavePredictions(const PredictionSet& predictions, std::ostream& out) {
  out << "id,score\n";
  for (const auto& [id, score] : predictions.entries()) {
    out << CsvEscape(id) << ',' << FormatDouble(score) << '\n';
  }
}

std::vector<LabeledId> LabelsOf(const TokenizedCorpus& corpus) {
  std::vector<LabeledId> labels;
  labels.reserve(corpus.size());
  for (const auto& u : corpus) {
    if (u.label) labels.push_back({u.id, *u.label});
  }
  return labels;
}

ScoredLabels Align(const PredictionSet& predictions,
                   std::span<const LabeledId> labels) {
  ScoredLabels out;
  out.scores.reserve(labels.size());
  out.labels.reserve(labels.size());
  std::vector<std::string> missing;
  for (const auto& l : labels) {
    if (auto score = predictions.Find(l.id)) {
      out.scores.push_back(*score);
      out.labels.push_back(l.label);
    } else {
      missing.push_back(l.id);
    }
  }
  if (!missing.empty()) {
    std::string message = "no prediction for " +
                          std::to_string(missing.size()) + " labeled id(s):";
    const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) message += " " + missing[i];
    if (shown < missing.size()) message += " ...";
    throw DataError(message);
  }
  return out;
}

PredictionSet EnsembleMean(const PredictionSet& a, const PredictionSet& b) {
  std::vector<std::string> only_a;
  std::vector<std::string> only_b;
  for (const auto& [id, score] : a.entries()) {
    if (!b.Find(id)) only_a.push_back(id);
  }
  for (const auto& [id, score] : b.entries()) {
    if (!a.Find(id)) only_b.push_back(id);
  }
  if (!only_a.empty() || !only_b.empty()) {
    std::string message = "prediction id sets differ;";
    if (!only_a.empty()) {
      message += " only in first:";
      for (const auto& id : only_a) message += " " + id;
      message += ";";
    }
    if (!only_b.empty()) {
      message += " only in second:";
      for (const auto& id : only_b) message += " " + id;
    }
    throw DataError(message);
  }
  PredictionSet out;
  for (const auto& [id, score] : a.entries()) {
    // 0.5 * (x + y) is symmetric in x, y and returns x exactly when x == y.
    out.Add(id, 0.5 * (score + *b.Find(id)));
  }
  return out;
}

}  // namespace toxattack
