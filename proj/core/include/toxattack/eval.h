#ifndef TOXATTACK_EVAL_H_
#define TOXATTACK_EVAL_H_

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

namespace toxattack {

// Utterance id -> score in [0, 1], in insertion order.
class PredictionSet {
 public:
  // Throws DataError for a score outside [0, 1] or a repeated id.
  void Add(std::string id, double score);

  std::optional<double> Find(std::string_view id) const;
  const std::vector<std::pair<std::string, double>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::pair<std::string, double>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// CSV with header `id,score`.
PredictionSet LoadPredictions(std::istream& in);
void SavePredictions(const PredictionSet& predictions, std::ostream& out);

struct LabeledId {
  std::string id;
  Label label;
};

// The labeled utterances of a corpus, in corpus order.
std::vector<LabeledId> LabelsOf(const TokenizedCorpus& corpus);

// Scores and labels aligned by position.
struct ScoredLabels {
  std::vector<double> scores;
  std::vector<Label> labels;
};

// Throws DataError listing every labeled id without a prediction.
ScoredLabels Align(const PredictionSet& predictions,
                   std::span<const LabeledId> labels);

// Probability that a random (positive, negative) pair is ranked correctly,
// ties counting one half, via the Mann-Whitney rank-sum with average ranks.
// Throws DataError unless both classes are present.
double Auc(std::span<const double> scores, std::span<const Label> labels);
double Auc(const PredictionSet& predictions, std::span<const LabeledId> labels);

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
};

// Classification rule: score >= threshold is positive.
ConfusionCounts CountAt(std::span<const double> scores,
                        std::span<const Label> labels, double threshold);

double Precision(const ConfusionCounts& c);  // 0 with no predicted positives
double Recall(const ConfusionCounts& c);     // 0 with no actual positives
double F1(const ConfusionCounts& c);         // 0 when P + R = 0

struct ThresholdChoice {
  double threshold = 0.0;
  double f1 = 0.0;
};

// Scans every distinct score as a candidate threshold and returns the one
// with the highest F1; F1 ties go to the smallest threshold.
ThresholdChoice TuneThreshold(std::span<const double> scores,
                              std::span<const Label> labels);
ThresholdChoice TuneThreshold(const PredictionSet& predictions,
                              std::span<const LabeledId> labels);

struct MetricsReport {
  double auc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double threshold = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t n() const { return tp + fp + fn + tn; }
};

MetricsReport Evaluate(std::span<const double> scores,
                       std::span<const Label> labels, double threshold);
MetricsReport Evaluate(const PredictionSet& predictions,
                       std::span<const LabeledId> labels, double threshold);

// {"auc","precision","recall","f1","threshold","tp","fp","fn","tn","n"}.
std::string ReportToJson(const MetricsReport& report);
MetricsReport ReportFromJson(std::istream& in);

// 100 * (after - before) / before. Throws DataError when before == 0.
double RelativeChange(double before, double after);

// Per-id arithmetic mean, in the order of `a`. Throws DataError listing the
// symmetric difference when the id sets differ.
PredictionSet EnsembleMean(const PredictionSet& a, const PredictionSet& b);

struct WilcoxonResult {
  // min(W+, W-).
  double statistic = 0.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  // Pairs with a non-zero difference.
  std::size_t n_effective = 0;
  double p_two_sided = 1.0;
  bool exact = true;
};

inline constexpr std::size_t kWilcoxonExactLimit = 25;

// Differences are first - second. Zero differences are dropped and the
// absolute differences ranked with average ranks for ties. The p-value is
// exact for n_effective <= 25 and otherwise uses the tie-corrected normal
// approximation with a continuity correction of 0.5. Throws DataError when
// every difference is zero.
WilcoxonResult WilcoxonSignedRank(
    std::span<const std::pair<double, double>> pairs);

// Building blocks, exposed for cross-checking.
//
// Average ranks (1-based) of |d| for the non-zero differences.
std::vector<double> SignedRankMagnitudes(std::span<const double> nonzero);
// P(min(W+, W-) <= statistic) under the sign-flip null, counted exactly over
// the 2^n sign assignments of `ranks`.
double WilcoxonExactPValue(std::span<const double> ranks, double statistic);
double WilcoxonNormalPValue(std::span<const double> ranks, double statistic);

}  // namespace toxattack

#endif  // TOXATTACK_EVAL_H_
