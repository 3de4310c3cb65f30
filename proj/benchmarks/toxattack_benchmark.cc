#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "toxattack/experiment.h"
#include "toxattack/synthetic.h"

namespace toxattack {
namespace {

const SyntheticBenchmark& Bench() {
  static const SyntheticBenchmark bench =
      GenerateSyntheticBenchmark(SyntheticRecipe{});
  return bench;
}

const TokenizedCorpus& Background() {
  static const TokenizedCorpus corpus = PrepareCorpus(Bench().background);
  return corpus;
}

void BM_Scramble(benchmark::State& state) {
  DeterministicRng rng(1);
  const std::string token = "stupidityness";
  for (auto _ : state) benchmark::DoNotOptimize(Scramble(token, rng));
}
BENCHMARK(BM_Scramble);

void BM_NearestNeighbor(benchmark::State& state) {
  const Vocabulary vocab = BuildVocabulary(Background(), 2);
  const NeighborIndex index(vocab.tokens());
  const auto& words = Bench().toxic_words;
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.Nearest(words[i++ % words.size()]));
  }
  state.counters["vocab"] = static_cast<double>(vocab.size());
}
BENCHMARK(BM_NearestNeighbor);

void BM_Auc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  DeterministicRng rng(2);
  std::vector<double> scores(n);
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.UniformReal();
    labels[i] = i % 3 == 0 ? Label::kToxic : Label::kNonToxic;
  }
  for (auto _ : state) benchmark::DoNotOptimize(Auc(scores, labels));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Auc)->Arg(1000)->Arg(100000);

void BM_TrainEpoch(benchmark::State& state) {
  static const TokenizedCorpus train = PrepareCorpus(Bench().train);
  TrainConfig config;
  config.epochs = 1;
  config.batch_size = 32;
  for (auto _ : state) benchmark::DoNotOptimize(TrainOnCorpus(train, config));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(train.size()));
}
BENCHMARK(BM_TrainEpoch);

void BM_NoiseCorpus(benchmark::State& state) {
  static const TokenizedCorpus test = PrepareCorpus(Bench().test);
  TrainConfig train_config;
  train_config.learning_rate = 0.5;
  train_config.epochs = 30;
  train_config.batch_size = 32;
  const ToxicLexicon lexicon =
      BuildLexicon(Background(), kDefaultLexiconSize, train_config);
  const NeighborIndex index(
      BaseVocabularyTokens(BuildVocabulary(Background(), 2), lexicon));
  const ConfusionMap map = DefaultConfusionMap();
  const Attack attack(AttackConfig{}, lexicon, index, map);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        attack.NoiseCorpus(test, static_cast<unsigned>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(test.size()));
}
BENCHMARK(BM_NoiseCorpus)->Arg(1)->Arg(4)->UseRealTime();

}  // namespace
}  // namespace toxattack

BENCHMARK_MAIN();
