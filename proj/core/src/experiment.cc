#include "toxattack/experiment.h"

namespace toxattack {

PredictionSet ScoreCorpus(const LogRegModel& model,
                          const TokenizedCorpus& corpus) {
  PredictionSet predictions;
  for (const auto& u : corpus) {
    predictions.Add(u.id, model.PredictTokens(u.tokens));
  }
  return predictions;
}

TrainedBaseline TrainBaseline(const TokenizedCorpus& train,
                              const TrainConfig& config) {
  TrainedBaseline baseline{TrainOnCorpus(train, config), 0.5};
  const auto labels = LabelsOf(train);
  baseline.threshold =
      TuneThreshold(ScoreCorpus(baseline.model, train), labels).threshold;
  return baseline;
}

TokenizedCorpus ApplyNoise(const TokenizedCorpus& corpus, NoiseSetting setting,
                           AttackConfig config, const ToxicLexicon& lexicon,
                           const NeighborIndex& base_vocab,
                           const ConfusionMap& map, unsigned threads) {
  if (setting == NoiseSetting::kNone) return corpus;
  config.ApplyNoiseSetting(setting);
  return Attack(config, lexicon, base_vocab, map).NoiseCorpus(corpus, threads);
}

std::vector<GridCell> RunGrid(const GridInputs& in,
                              std::span<const NoiseSetting> train_settings,
                              std::span<const NoiseSetting> test_settings) {
  std::map<NoiseSetting, TokenizedCorpus> noised_tests;
  for (NoiseSetting s : test_settings) {
    if (!noised_tests.count(s)) {
      noised_tests.emplace(s, ApplyNoise(in.test, s, in.attack, in.lexicon,
                                         in.base_vocab, in.map, in.threads));
    }
  }
  std::vector<GridCell> cells;
  for (NoiseSetting train_noise : train_settings) {
    const TrainedBaseline baseline = TrainBaseline(
        ApplyNoise(in.train, train_noise, in.attack, in.lexicon, in.base_vocab,
                   in.map, in.threads),
        in.train_config);
    for (NoiseSetting test_noise : test_settings) {
      const TokenizedCorpus& test = noised_tests.at(test_noise);
      const MetricsReport report =
          Evaluate(ScoreCorpus(baseline.model, test), LabelsOf(test),
                   baseline.threshold);
      cells.push_back({train_noise, test_noise, report});
    }
  }
  return cells;
}

}  // namespace toxattack
