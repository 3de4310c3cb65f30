#include "toxattack/eval.h"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "toxattack/error.h"

namespace toxattack {
namespace {

void CheckAligned(std::span<const double> scores,
                  std::span<const Label> labels) {
  if (scores.size() != labels.size()) {
    throw DataError("scores and labels differ in length");
  }
}

std::int64_t CountPositives(std::span<const Label> labels) {
  return std::count(labels.begin(), labels.end(), Label::kToxic);
}

void RequireBothClasses(std::span<const Label> labels) {
  const auto positives = CountPositives(labels);
  if (positives == 0 || positives == static_cast<std::int64_t>(labels.size())) {
    throw DataError("labels contain a single class");
  }
}

// Indices sorted by descending score.
std::vector<std::size_t> ByScoreDescending(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

}  // namespace

double Auc(std::span<const double> scores, std::span<const Label> labels) {
  CheckAligned(scores, labels);
  RequireBothClasses(labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  // Sum of (average) ranks of the positives. Ranks are half-integers, so the
  // sum is exact in double precision for any realistic size.
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double average_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == Label::kToxic) positive_rank_sum += average_rank;
    }
    i = j;
  }
  const auto p = static_cast<double>(CountPositives(labels));
  const auto n = static_cast<double>(labels.size()) - p;
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * n);
}

double Auc(const PredictionSet& predictions,
           std::span<const LabeledId> labels) {
  const ScoredLabels aligned = Align(predictions, labels);
  return Auc(aligned.scores, aligned.labels);
}

ConfusionCounts CountAt(std::span<const double> scores,
                        std::span<const Label> labels, double threshold) {
  CheckAligned(scores, labels);
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    const bool actual = labels[i] == Label::kToxic;
    if (predicted && actual) ++c.tp;
    if (predicted && !actual) ++c.fp;
    if (!predicted && actual) ++c.fn;
    if (!predicted && !actual) ++c.tn;
  }
  return c;
}

double Precision(const ConfusionCounts& c) {
  const auto predicted = c.tp + c.fp;
  return predicted == 0 ? 0.0
                        : static_cast<double>(c.tp) /
                              static_cast<double>(predicted);
}

double Recall(const ConfusionCounts& c) {
  const auto actual = c.tp + c.fn;
  return actual == 0 ? 0.0
                     : static_cast<double>(c.tp) / static_cast<double>(actual);
}

double F1(const ConfusionCounts& c) {
  const double p = Precision(c);
  const double r = Recall(c);
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

ThresholdChoice TuneThreshold(std::span<const double> scores,
                              std::span<const Label> labels) {
  CheckAligned(scores, labels);
  RequireBothClasses(labels);
  const std::int64_t positives = CountPositives(labels);
  const auto order = ByScoreDescending(scores);

  // F1 = 2tp / (2tp + fp + fn); candidates are compared as exact fractions.
  std::int64_t best_num = -1;
  std::int64_t best_den = 1;
  double best_threshold = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double candidate = scores[order[i]];
    while (i < order.size() && scores[order[i]] == candidate) {
      (labels[order[i]] == Label::kToxic ? tp : fp) += 1;
      ++i;
    }
    const std::int64_t num = 2 * tp;
    const std::int64_t den = 2 * tp + fp + (positives - tp);
    // Thresholds are visited in decreasing order, so ">=" keeps the
    // smallest threshold among equal F1 values.
    if (best_num < 0 || num * best_den >= best_num * den) {
      best_num = num;
      best_den = den;
      best_threshold = candidate;
    }
  }
  return {best_threshold,
          static_cast<double>(best_num) / static_cast<double>(best_den)};
}

ThresholdChoice TuneThreshold(const PredictionSet& predictions,
                              std::span<const LabeledId> labels) {
  const ScoredLabels aligned = Align(predictions, labels);
  return TuneThreshold(aligned.scores, aligned.labels);
}

MetricsReport Evaluate(std::span<const double> scores,
                       std::span<const Label> labels, double threshold) {
  const ConfusionCounts c = CountAt(scores, labels, threshold);
  MetricsReport report;
  report.auc = Auc(scores, labels);
  report.precision = Precision(c);
  report.recall = Recall(c);
  report.f1 = F1(c);
  report.threshold = threshold;
  report.tp = c.tp;
  report.fp = c.fp;
  report.fn = c.fn;
  report.tn = c.tn;
  return report;
}

MetricsReport Evaluate(const PredictionSet& predictions,
                       std::span<const LabeledId> labels, double threshold) {
  const ScoredLabels aligned = Align(predictions, labels);
  return Evaluate(aligned.scores, aligned.labels, threshold);
}

std::string ReportToJson(const MetricsReport& r) {
  nlohmann::ordered_json doc = {
      {"auc", r.auc},   {"precision", r.precision}, {"recall", r.recall},
      {"f1", r.f1},     {"threshold", r.threshold}, {"tp", r.tp},
      {"fp", r.fp},     {"fn", r.fn},               {"tn", r.tn},
      {"n", r.n()},
  };
  return doc.dump(1);
}

MetricsReport ReportFromJson(std::istream& in) {
  try {
    const auto doc = nlohmann::json::parse(in);
    MetricsReport r;
    r.auc = doc.at("auc").get<double>();
    r.precision = doc.at("precision").get<double>();
    r.recall = doc.at("recall").get<double>();
    r.f1 = doc.at("f1").get<double>();
    r.threshold = doc.at("threshold").get<double>();
    r.tp = doc.at("tp").get<std::int64_t>();
    r.fp = doc.at("fp").get<std::int64_t>();
    r.fn = doc.at("fn").get<std::int64_t>();
    r.tn = doc.at("tn").get<std::int64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("metrics report: ") + e.what());
  }
}

double RelativeChange(double before, double after) {
  if (before == 0.0) throw DataError("relative change from a zero baseline");
  return 100.0 * (after - before) / before;
}

}  // namespace toxattack
