#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "checks.h"
#include "oracles.h"
#include "toxattack/error.h"
#include "toxattack/eval.h"
#include "toxattack/rng.h"

namespace toxattack {
namespace {

constexpr Label P = Label::kToxic;
constexpr Label N = Label::kNonToxic;

PredictionSet Set(std::initializer_list<std::pair<const char*, double>> items) {
  PredictionSet s;
  for (const auto& [id, score] : items) s.Add(id, score);
  return s;
}

std::vector<LabeledId> Labels(std::initializer_list<std::pair<const char*, Label>> items) {
  std::vector<LabeledId> out;
  for (const auto& [id, l] : items) out.push_back({id, l});
  return out;
}

TEST(Auc, Examples) {
  EXPECT_EQ(Auc(Set({{"a", 0.9}, {"b", 0.1}}), Labels({{"a", P}, {"b", N}})), 1.0);
  EXPECT_EQ(Auc(Set({{"a", 0.1}, {"b", 0.9}}), Labels({{"a", P}, {"b", N}})), 0.0);
  EXPECT_EQ(Auc(Set({{"a", 0.5}, {"b", 0.5}, {"c", 0.9}}),
                Labels({{"a", N}, {"b", P}, {"c", P}})),
            0.75);
  EXPECT_THROW(Auc(Set({{"a", 0.5}}), Labels({{"a", P}})), DataError);
}

TEST(Auc, MissingPredictionListsIds) {
  try {
    Auc(Set({{"a", 0.5}}), Labels({{"a", P}, {"zz", N}, {"yy", N}}));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("yy"), std::string::npos);
  }
}

TEST(Auc, PairCountingOracle) {
  double worst = 0;
  const auto t = checks::AucOracle(200, 1, 1e-12, &worst);
  EXPECT_TRUE(t.ok()) << t.first_failure << " worst " << worst;
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  DeterministicRng rng(5);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s, tr;
    std::vector<Label> l;
    for (int i = 0; i < 30; ++i) {
      s.push_back(static_cast<double>(rng.Uniform(8)) / 8);
      tr.push_back(std::pow(s.back(), 3) * 0.5 + 0.1);
      l.push_back(i % 3 == 0 ? P : N);
    }
    EXPECT_EQ(Auc(s, l), Auc(tr, l));
  }
}

TEST(TuneThreshold, Examples) {
  auto c = TuneThreshold(Set({{"a", 0.2}, {"b", 0.8}}), Labels({{"a", N}, {"b", P}}));
  EXPECT_EQ(c.threshold, 0.8);
  EXPECT_EQ(c.f1, 1.0);
  c = TuneThreshold(Set({{"a", 0.1}, {"b", 0.4}, {"c", 0.35}, {"d", 0.8}}),
                    Labels({{"a", N}, {"b", N}, {"c", P}, {"d", P}}));
  EXPECT_EQ(c.threshold, 0.35);
  EXPECT_NEAR(c.f1, 0.8, 1e-15);
  c = TuneThreshold(Set({{"a", 0.3}, {"b", 0.3}, {"c", 0.3}}),
                    Labels({{"a", N}, {"b", P}, {"c", N}}));
  EXPECT_EQ(c.threshold, 0.3);
  EXPECT_NEAR(c.f1, 0.5, 1e-15);
  EXPECT_THROW(TuneThreshold(Set({{"a", 0.3}}), Labels({{"a", N}})), DataError);
}

TEST(TuneThreshold, ExhaustiveScanOracle) {
  const auto t = checks::ThresholdOracle(300, 2);
  EXPECT_TRUE(t.ok()) << t.first_failure;
}

TEST(Evaluate, Examples) {
  const auto perfect = Evaluate(Set({{"a", 0.9}, {"b", 0.1}}),
                                Labels({{"a", P}, {"b", N}}), 0.5);
  EXPECT_EQ(perfect.precision, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  EXPECT_EQ(perfect.f1, 1.0);
  EXPECT_EQ(perfect.n(), 2);

  const ConfusionCounts c{1, 1, 0, 0};
  EXPECT_EQ(Precision(c), 0.5);
  EXPECT_EQ(Recall(c), 1.0);
  EXPECT_NEAR(F1(c), 2.0 / 3.0, 1e-15);

  const auto none = Evaluate(Set({{"a", 0.2}, {"b", 0.1}}),
                             Labels({{"a", P}, {"b", N}}), 0.5);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_EQ(none.recall, 0.0);
  EXPECT_EQ(none.f1, 0.0);
  EXPECT_EQ(none.fn, 1);
  EXPECT_EQ(none.tn, 1);
}

TEST(Evaluate, InclusiveRule) {
  const auto r = Evaluate(Set({{"a", 0.5}, {"b", 0.1}}), Labels({{"a", P}, {"b", N}}), 0.5);
  EXPECT_EQ(r.tp, 1);
}

TEST(Report, JsonRoundTrip) {
  const auto r = Evaluate(Set({{"a", 0.7}, {"b", 0.4}, {"c", 0.6}}),
                          Labels({{"a", P}, {"b", P}, {"c", N}}), 0.55);
  std::istringstream in(ReportToJson(r));
  const MetricsReport back = ReportFromJson(in);
  EXPECT_EQ(back.auc, r.auc);
  EXPECT_EQ(back.f1, r.f1);
  EXPECT_EQ(back.tp, r.tp);
  EXPECT_EQ(back.tn, r.tn);
  EXPECT_NE(ReportToJson(r).find("\"n\""), std::string::npos);
}

TEST(RelativeChange, PublishedFigures) {
  EXPECT_EQ(std::round(RelativeChange(0.822, 0.344) * 10) / 10, -58.2);
  EXPECT_EQ(std::round(RelativeChange(0.621, 0.246) * 10) / 10, -60.4);
  EXPECT_EQ(RelativeChange(0.3, 0.3), 0.0);
  EXPECT_THROW(RelativeChange(0.0, 0.5), DataError);
}

TEST(Ensemble, Examples) {
  const PredictionSet a = Set({{"x", 0.2}, {"y", 0.9}});
  const PredictionSet b = Set({{"y", 0.1}, {"x", 0.6}});
  const PredictionSet m = EnsembleMean(a, b);
  EXPECT_NEAR(*m.Find("x"), 0.4, 1e-15);
  EXPECT_EQ(EnsembleMean(a, a).entries(), a.entries());
  const PredictionSet ba = EnsembleMean(b, a);
  for (const auto& [id, s] : m.entries()) EXPECT_EQ(*ba.Find(id), s);
  try {
    EnsembleMean(a, Set({{"x", 0.1}, {"q", 0.2}}));
    FAIL();
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("y"), std::string::npos);
    EXPECT_NE(what.find("q"), std::string::npos);
  }
}

TEST(Predictions, CsvRoundTripAndErrors) {
  DeterministicRng rng(3);
  PredictionSet s;
  for (int i = 0; i < 100; ++i) s.Add("id," + std::to_string(i), rng.UniformReal());
  std::stringstream buf;
  SavePredictions(s, buf);
  EXPECT_EQ(LoadPredictions(buf).entries(), s.entries());
  std::istringstream range("id,score\na,1.2\n");
  EXPECT_THROW(LoadPredictions(range), DataError);
  std::istringstream dup("id,score\na,0.1\na,0.2\n");
  try {
    LoadPredictions(dup);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream header_only("id,score\n");
  EXPECT_TRUE(LoadPredictions(header_only).empty());
  std::istringstream no_header("a,0.1\n");
  EXPECT_THROW(LoadPredictions(no_header), DataError);
}

std::vector<std::pair<double, double>> Diffs(std::initializer_list<double> d) {
  std::vector<std::pair<double, double>> out;
  for (double x : d) out.push_back({x, 0.0});
  return out;
}

TEST(Wilcoxon, Examples) {
  const auto r = WilcoxonSignedRank(Diffs({1, 2, 3}));
  EXPECT_EQ(r.w_minus, 0.0);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.n_effective, 3u);
  EXPECT_NEAR(r.p_two_sided, 0.25, 1e-15);
  EXPECT_TRUE(r.exact);
  const auto one = WilcoxonSignedRank(Diffs({5}));
  EXPECT_EQ(one.statistic, 0.0);
  EXPECT_EQ(one.p_two_sided, 1.0);
  EXPECT_THROW(WilcoxonSignedRank(Diffs({0, 0})), DataError);
}

TEST(Wilcoxon, ZerosDroppedAndTiesAveraged) {
  const auto r = WilcoxonSignedRank(Diffs({0, 1, -1, 2}));
  EXPECT_EQ(r.n_effective, 3u);
  EXPECT_EQ(r.w_plus, 1.5 + 3);
  EXPECT_EQ(r.w_minus, 1.5);
}

TEST(Wilcoxon, Antisymmetry) {
  DeterministicRng rng(4);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::pair<double, double>> a, b;
    for (auto n = 1 + rng.Uniform(40); n > 0; --n) {
      const double d = static_cast<double>(rng.Uniform(7)) - 3;
      a.push_back({d, 0});
      b.push_back({0, d});
    }
    a.push_back({1, 0});
    b.push_back({0, 1});
    const auto ra = WilcoxonSignedRank(a);
    const auto rb = WilcoxonSignedRank(b);
    EXPECT_EQ(ra.statistic, rb.statistic);
    EXPECT_EQ(ra.p_two_sided, rb.p_two_sided);
  }
}

TEST(Wilcoxon, ExactMatchesEnumeration) {
  const auto t = checks::WilcoxonExactOracle(300, 5, 10);
  EXPECT_TRUE(t.ok()) << t.first_failure;
}

TEST(Wilcoxon, NormalApproximationNearExactAtTwenty) {
  double gap = 0;
  const auto t = checks::WilcoxonNormalAgreement(200, 6, 0.02, &gap);
  EXPECT_TRUE(t.ok()) << "max gap " << gap;
}

TEST(Wilcoxon, LargeSampleUsesNormal) {
  std::vector<std::pair<double, double>> pairs;
  for (int i = 1; i <= 30; ++i) pairs.push_back({i % 4 == 0 ? -i : i, 0});
  const auto r = WilcoxonSignedRank(pairs);
  EXPECT_FALSE(r.exact);
  EXPECT_GT(r.p_two_sided, 0.0);
  EXPECT_LT(r.p_two_sided, 0.05);
}

TEST(Wilcoxon, ExactPValueFrozen) {
  // Exact two-sided p from the enumeration oracle for differences 1..10
  // with signs flipped on 2, 5 and 9.
  std::vector<double> d = {1, -2, 3, 4, -5, 6, 7, 8, -9, 10};
  const auto want = oracle::EnumerateWilcoxon(d);
  std::vector<std::pair<double, double>> pairs;
  for (double x : d) pairs.push_back({x, 0});
  EXPECT_EQ(want.statistic, 16.0);
  EXPECT_NEAR(WilcoxonSignedRank(pairs).p_two_sided, want.p_two_sided, 1e-15);
  EXPECT_NEAR(want.p_two_sided, 0.275390625, 1e-15);
}

}  // namespace
}  // namespace toxattack
