#ifndef TOXATTACK_EXPERIMENT_H_
#define TOXATTACK_EXPERIMENT_H_

#include <map>
#include <span>
#include <vector>

#include "toxattack/attack.h"
#include "toxattack/eval.h"
#include "toxattack/optim.h"

namespace toxattack {

// Logistic-regression baseline with its F1-maximizing training threshold.
struct TrainedBaseline {
  LogRegModel model;
  double threshold = 0.5;
};

PredictionSet ScoreCorpus(const LogRegModel& model,
                          const TokenizedCorpus& corpus);

// Trains on `train` and tunes the threshold on its own predictions.
TrainedBaseline TrainBaseline(const TokenizedCorpus& train,
                              const TrainConfig& config);

// Noises `corpus` according to `setting` (identity for kNone).
TokenizedCorpus ApplyNoise(const TokenizedCorpus& corpus, NoiseSetting setting,
                           AttackConfig config, const ToxicLexicon& lexicon,
                           const NeighborIndex& base_vocab,
                           const ConfusionMap& map, unsigned threads = 1);

struct GridInputs {
  const TokenizedCorpus& train;
  const TokenizedCorpus& test;
  const ToxicLexicon& lexicon;
  const NeighborIndex& base_vocab;
  const ConfusionMap& map;
  AttackConfig attack;
  TrainConfig train_config;
  unsigned threads = 1;
};

struct GridCell {
  NoiseSetting train_noise;
  NoiseSetting test_noise;
  MetricsReport report;
};

// Every (train, test) combination; each model is trained once per train
// setting and each test noise applied once.
std::vector<GridCell> RunGrid(const GridInputs& inputs,
                              std::span<const NoiseSetting> train_settings,
                              std::span<const NoiseSetting> test_settings);

}  // namespace toxattack

#endif  // TOXATTACK_EXPERIMENT_H_
