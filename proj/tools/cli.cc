#include "cli.h"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "toxattack/csv.h"
#include "toxattack/error.h"
#include "toxattack/experiment.h"
#include "toxattack/synthetic.h"
#include "toxattack/text.h"
#include "toxattack/version.h"

namespace toxattack::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string Checksum(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(Fnv1a(bytes)));
  return buf;
}

// Tracks what one command reads and writes, and emits manifest.json.
class Session {
 public:
  Session(std::string command, std::vector<std::string> argv, fs::path out_dir)
      : command_(std::move(command)),
        argv_(std::move(argv)),
        out_dir_(std::move(out_dir)) {}

  std::string Read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();
    inputs_[path] = Checksum(bytes);
    std::error_code ec;
    const fs::path canonical = fs::weakly_canonical(path, ec);
    if (!ec) input_paths_.insert(canonical);
    return bytes;
  }

  void Write(const std::string& name, const std::string& bytes) {
    if (!output_dir_ready_) {
      fs::create_directories(out_dir_);
      output_dir_ready_ = true;
    }
    const fs::path target = out_dir_ / name;
    std::error_code ec;
    if (input_paths_.count(fs::weakly_canonical(target, ec))) {
      throw DataError("refusing to overwrite input '" + target.string() + "'");
    }
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) throw DataError("cannot write '" + target.string() + "'");
    outputs_[name] = Checksum(bytes);
  }

  void SetSeed(std::uint64_t seed) { seed_ = seed; }
  void SetConfig(const AttackConfig* attack, const TrainConfig* train) {
    std::ostringstream text;
    if (attack != nullptr) attack->Write(text);
    if (train != nullptr) train->Write(text);
    std::istringstream in(text.str());
    config_ = Json::object();
    const KeyValues kv = KeyValues::Parse(in);
    for (const auto& [k, v] : kv.entries()) config_[k] = v;
  }
  Json& extra() { return extra_; }

  void Finish() {
    Json m;
    m["toolkit"] = "toxattack";
    m["version"] = std::string(kVersion);
    m["command"] = command_;
    m["argv"] = argv_;
    m["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    m["config"] = config_;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    for (const auto& [k, v] : extra_.items()) m[k] = v;
    Write("manifest.json", m.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::vector<std::string> argv_;
  fs::path out_dir_;
  bool output_dir_ready_ = false;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
  std::set<fs::path> input_paths_;
  std::optional<std::uint64_t> seed_;
  Json config_ = Json::object();
  Json extra_ = Json::object();
};

unsigned ThreadsFromEnv() {
  const char* raw = std::getenv("TOXATTACK_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(raw, &end, 10);
  if (*end != '\0' || v > 4096) {
    throw UsageError("TOXATTACK_THREADS must be a non-negative integer");
  }
  return static_cast<unsigned>(v);
}

// Options every verb accepts.
struct Common {
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;
  std::string config_path;
  std::string out_dir;
};

void AddCommon(CLI::App* sub, Common& c) {
  c.seed_option = sub->add_option(
      "--seed", c.seed,
      "Seed for attacks and training (overrides master_seed and train_seed)");
  sub->add_option("--config", c.config_path,
                  "key = value file with attack and training settings");
  sub->add_option("--out", c.out_dir, "Output directory")->required();
}

struct Configs {
  AttackConfig attack;
  TrainConfig train;
};

Configs LoadConfigs(Session& session, const Common& c) {
  KeyValues kv;
  if (!c.config_path.empty()) {
    std::istringstream in(session.Read(c.config_path));
    kv = KeyValues::Parse(in);
    std::set<std::string_view> known;
    for (auto k : AttackConfig::Keys()) known.insert(k);
    for (auto k : TrainConfig::Keys()) known.insert(k);
    for (const auto& [k, v] : kv.entries()) {
      if (!known.count(k)) {
        throw DataError("unknown config key '" + k + "' in " + c.config_path);
      }
    }
  }
  if (c.seed_option != nullptr && c.seed_option->count() > 0) {
    kv.Set("master_seed", std::to_string(c.seed));
    kv.Set("train_seed", std::to_string(c.seed));
  }
  return {AttackConfig::FromKeyValues(kv), TrainConfig::FromKeyValues(kv)};
}

TokenizedCorpus ReadCorpus(Session& session, const std::string& path) {
  std::istringstream in(session.Read(path));
  try {
    return LoadAnyCorpus(in, FormatFromPath(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

ToxicLexicon ReadLexicon(Session& session, const std::string& path) {
  std::istringstream in(session.Read(path));
  try {
    return LoadLexicon(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

// One token per line.
std::vector<std::string> ReadTokenList(Session& session,
                                       const std::string& path) {
  std::istringstream in(session.Read(path));
  std::vector<std::string> tokens;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) throw DataError(path + ": empty token", number);
    if (!IsValidUtf8(line)) throw DataError(path + ": invalid UTF-8", number);
    tokens.push_back(std::move(line));
  }
  return tokens;
}

std::string TokenListText(const std::vector<std::string>& tokens) {
  std::string text;
  for (const auto& t : tokens) {
    if (t.find('\n') != std::string::npos) {
      throw DataError("token contains a newline");
    }
    text += t;
    text += '\n';
  }
  return text;
}

ConfusionMap ReadMap(Session& session, const std::string& path) {
  if (path.empty()) return DefaultConfusionMap();
  std::istringstream in(session.Read(path));
  try {
    return LoadConfusionMap(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

PredictionSet ReadPredictions(Session& session, const std::string& path) {
  std::istringstream in(session.Read(path));
  try {
    return LoadPredictions(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

bool UsesNearNeighbor(const AttackConfig& c) {
  if (!c.obfuscation_enabled) return false;
  for (PerturbOp op : c.enabled_ops) {
    if (op == PerturbOp::kNearNeighbor) return true;
  }
  return false;
}

// Inputs shared by every verb that noises a corpus.
struct NoiseInputs {
  std::string lexicon;
  std::string base_vocab;
  std::string confusion_map;

  void Add(CLI::App* sub) {
    sub->add_option("--lexicon", lexicon, "Lexicon TSV");
    sub->add_option("--base-vocab", base_vocab,
                    "Near-neighbor vocabulary, one token per line");
    sub->add_option("--confusion-map", confusion_map,
                    "Homoglyph map TSV (default: built-in map)");
  }
};

struct LoadedNoise {
  ToxicLexicon lexicon;
  NeighborIndex index;
  ConfusionMap map;
};

LoadedNoise LoadNoise(Session& session, const NoiseInputs& in,
                      const AttackConfig& config, bool need_lexicon) {
  LoadedNoise loaded;
  if (need_lexicon) {
    if (in.lexicon.empty()) throw UsageError("--lexicon is required");
    loaded.lexicon = ReadLexicon(session, in.lexicon);
  }
  if (!in.base_vocab.empty()) {
    loaded.index = NeighborIndex(ReadTokenList(session, in.base_vocab));
  } else if (UsesNearNeighbor(config)) {
    throw UsageError(
        "--base-vocab is required when near_neighbor perturbation is enabled");
  }
  loaded.map = ReadMap(session, in.confusion_map);
  return loaded;
}

NoiseSetting ParseSetting(const std::string& text) {
  try {
    return ParseNoiseSetting(text);
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

std::vector<NoiseSetting> ParseSettingList(const std::string& text) {
  std::vector<NoiseSetting> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(ParseSetting(item));
  if (out.empty()) throw UsageError("empty noise setting list");
  return out;
}

std::string Jsonl(const TokenizedCorpus& corpus) {
  std::ostringstream out;
  SaveTokenizedCorpus(corpus, out);
  return out.str();
}

std::string PredictionsCsv(const PredictionSet& p) {
  std::ostringstream out;
  SavePredictions(p, out);
  return out.str();
}

////////////////////////////////////////////////////////////////////////////
// Verbs.

struct PrepareArgs {
  Common common;
  std::string input;
};

int RunPrepare(const PrepareArgs& a, Session& s, std::ostream& out) {
  LoadConfigs(s, a.common);
  const TokenizedCorpus corpus = ReadCorpus(s, a.input);
  s.Write("tokenized.jsonl", Jsonl(corpus));
  s.Finish();
  out << "prepared " << corpus.size() << " utterances\n";
  return kExitOk;
}

struct SynthArgs {
  Common common;
  std::size_t background = 0;
  std::size_t train = 0;
  std::size_t test = 0;
};

int RunSynth(const SynthArgs& a, Session& s, std::ostream& out) {
  LoadConfigs(s, a.common);
  SyntheticRecipe recipe;
  if (a.common.seed_option->count() > 0) recipe.seed = a.common.seed;
  if (a.background > 0) recipe.background_size = a.background;
  if (a.train > 0) recipe.train_size = a.train;
  if (a.test > 0) recipe.test_size = a.test;
  s.SetSeed(recipe.seed);
  const SyntheticBenchmark bench = GenerateSyntheticBenchmark(recipe);
  const auto save = [&](const std::string& name, const Corpus& c) {
    std::ostringstream buf;
    SaveCorpus(c, buf, CorpusFormat::kJsonl);
    s.Write(name, buf.str());
  };
  save("background.jsonl", bench.background);
  save("train.jsonl", bench.train);
  save("test.jsonl", bench.test);
  s.Write("toxic_words.txt", TokenListText(bench.toxic_words));
  s.extra()["recipe"] = {{"seed", recipe.seed},
                         {"background_size", recipe.background_size},
                         {"train_size", recipe.train_size},
                         {"test_size", recipe.test_size},
                         {"toxic_words", recipe.toxic_words}};
  s.Finish();
  out << "wrote " << bench.background.size() << "/" << bench.train.size()
      << "/" << bench.test.size() << " background/train/test utterances\n";
  return kExitOk;
}

struct BuildLexiconArgs {
  Common common;
  std::string background;
  std::size_t k = kDefaultLexiconSize;
};

int RunBuildLexicon(const BuildLexiconArgs& a, Session& s, std::ostream& out) {
  const Configs cfg = LoadConfigs(s, a.common);
  s.SetConfig(nullptr, &cfg.train);
  s.SetSeed(cfg.train.seed);
  const TokenizedCorpus bg = ReadCorpus(s, a.background);
  const ToxicLexicon lexicon = BuildLexicon(bg, a.k, cfg.train);
  std::ostringstream tsv;
  SaveLexicon(lexicon, tsv);
  s.Write("lexicon.tsv", tsv.str());
  s.Write("base_vocab.txt",
          TokenListText(BaseVocabularyTokens(
              BuildVocabulary(bg, cfg.train.min_df), lexicon)));
  s.extra()["lexicon_size"] = lexicon.size();
  s.Finish();
  out << "lexicon: " << lexicon.size() << " tokens\n";
  return kExitOk;
}

struct AttackArgs {
  Common common;
  NoiseInputs noise;
  std::string input;
  std::string setting;
};

int RunAttack(const AttackArgs& a, Session& s, std::ostream& out) {
  Configs cfg = LoadConfigs(s, a.common);
  if (!a.setting.empty()) cfg.attack.ApplyNoiseSetting(ParseSetting(a.setting));
  s.SetConfig(&cfg.attack, nullptr);
  s.SetSeed(cfg.attack.master_seed);
  const bool active =
      cfg.attack.obfuscation_enabled || cfg.attack.distractors_enabled;
  const LoadedNoise noise = LoadNoise(s, a.noise, cfg.attack, active);
  const TokenizedCorpus corpus = ReadCorpus(s, a.input);
  const TokenizedCorpus noised =
      Attack(cfg.attack, noise.lexicon, noise.index, noise.map)
          .NoiseCorpus(corpus, ThreadsFromEnv());
  s.Write("noised.jsonl", Jsonl(noised));
  s.Finish();
  out << "noised " << noised.size() << " utterances\n";
  return kExitOk;
}

struct TrainArgs {
  Common common;
  NoiseInputs noise;
  std::string input;
  std::string train_noise = "none";
  int epochs = -1;
};

int RunTrain(const TrainArgs& a, Session& s, std::ostream& out) {
  Configs cfg = LoadConfigs(s, a.common);
  if (a.epochs >= 0) cfg.train.epochs = a.epochs;
  cfg.train.Validate();
  const NoiseSetting setting = ParseSetting(a.train_noise);
  cfg.attack.ApplyNoiseSetting(setting);
  s.SetConfig(&cfg.attack, &cfg.train);
  s.SetSeed(cfg.train.seed);
  TokenizedCorpus corpus = ReadCorpus(s, a.input);
  if (setting != NoiseSetting::kNone) {
    const LoadedNoise noise = LoadNoise(s, a.noise, cfg.attack, true);
    corpus = ApplyNoise(corpus, setting, cfg.attack, noise.lexicon,
                        noise.index, noise.map, ThreadsFromEnv());
  }
  const TrainedBaseline baseline = TrainBaseline(corpus, cfg.train);
  const MetricsReport train_report =
      Evaluate(ScoreCorpus(baseline.model, corpus), LabelsOf(corpus),
               baseline.threshold);
  std::ostringstream model;
  SaveModel({baseline.model, cfg.train, baseline.threshold}, model);
  s.Write("model.json", model.str());
  s.extra()["train_noise"] = std::string(ToString(setting));
  s.extra()["train_metrics"] = Json::parse(ReportToJson(train_report));
  s.Finish();
  out << "threshold " << FormatDouble(baseline.threshold) << ", train recall "
      << FormatDouble(train_report.recall) << "\n";
  return kExitOk;
}

struct EvalArgs {
  Common common;
  std::string input;
  std::string model;
  std::string predictions;
  std::string baseline;
  double threshold = 0.0;
  CLI::Option* threshold_option = nullptr;
};

int RunEval(const EvalArgs& a, Session& s, std::ostream& out) {
  LoadConfigs(s, a.common);
  if (a.model.empty() == a.predictions.empty()) {
    throw UsageError("exactly one of --model and --predictions is required");
  }
  const TokenizedCorpus corpus = ReadCorpus(s, a.input);
  PredictionSet predictions;
  std::optional<double> threshold;
  if (!a.model.empty()) {
    std::istringstream in(s.Read(a.model));
    const SavedModel saved = LoadModel(in);
    predictions = ScoreCorpus(saved.model, corpus);
    threshold = saved.threshold;
    s.Write("predictions.csv", PredictionsCsv(predictions));
  } else {
    predictions = ReadPredictions(s, a.predictions);
  }
  if (a.threshold_option->count() > 0) threshold = a.threshold;
  if (!threshold) {
    throw UsageError(
        "--threshold is required when the model carries no threshold");
  }
  const MetricsReport report =
      Evaluate(predictions, LabelsOf(corpus), *threshold);
  Json metrics = Json::parse(ReportToJson(report));
  if (!a.baseline.empty()) {
    std::istringstream in(s.Read(a.baseline));
    const MetricsReport before = ReportFromJson(in);
    Json change = Json::object();
    const std::pair<const char*, std::pair<double, double>> rows[] = {
        {"auc", {before.auc, report.auc}},
        {"f1", {before.f1, report.f1}},
        {"recall", {before.recall, report.recall}}};
    for (const auto& [name, values] : rows) {
      change[name] = values.first == 0.0
                         ? Json(nullptr)
                         : Json(RelativeChange(values.first, values.second));
    }
    metrics["relative_change_pct"] = change;
  }
  s.Write("metrics.json", metrics.dump(2) + "\n");
  s.Finish();
  out << "auc " << FormatDouble(report.auc) << ", f1 "
      << FormatDouble(report.f1) << ", recall " << FormatDouble(report.recall)
      << "\n";
  return kExitOk;
}

struct EnsembleArgs {
  Common common;
  std::vector<std::string> inputs;
};

int RunEnsemble(const EnsembleArgs& a, Session& s, std::ostream& out) {
  LoadConfigs(s, a.common);
  const PredictionSet first = ReadPredictions(s, a.inputs[0]);
  const PredictionSet second = ReadPredictions(s, a.inputs[1]);
  const PredictionSet mean = EnsembleMean(first, second);
  s.Write("predictions.csv", PredictionsCsv(mean));
  s.Finish();
  out << "ensembled " << mean.size() << " predictions\n";
  return kExitOk;
}

struct DenoiserArgs {
  Common common;
  NoiseInputs noise;
  std::string input;
  DenoiserOptions options;
};

int RunDenoiser(const DenoiserArgs& a, Session& s, std::ostream& out) {
  const Configs cfg = LoadConfigs(s, a.common);
  s.SetConfig(&cfg.attack, nullptr);
  s.SetSeed(cfg.attack.master_seed);
  const LoadedNoise noise = LoadNoise(s, a.noise, cfg.attack, false);
  const TokenizedCorpus corpus = ReadCorpus(s, a.input);
  const Attack attack(cfg.attack, noise.lexicon, noise.index, noise.map);
  DeterministicRng rng(cfg.attack.master_seed);
  DenoiserStats stats;
  const auto pairs =
      GenerateDenoiserPairs(corpus, a.options, attack, rng, &stats);
  std::string text;
  for (const auto& p : pairs) {
    text += Json{{"noised", p.noised}, {"clean", p.clean}}.dump();
    text += '\n';
  }
  s.Write("pairs.jsonl", text);
  const double fraction =
      stats.tokens == 0 ? 0.0
                        : static_cast<double>(stats.perturbed_or_masked) /
                              static_cast<double>(stats.tokens);
  s.extra()["denoiser"] = {{"noise_rate", a.options.noise_rate},
                           {"mask_rate", a.options.mask_rate},
                           {"tokens", stats.tokens},
                           {"perturbed", stats.perturbed},
                           {"masked", stats.masked},
                           {"perturbed_or_masked", stats.perturbed_or_masked},
                           {"changed", stats.changed},
                           {"perturbed_or_masked_fraction", fraction}};
  s.Finish();
  out << pairs.size() << " pairs, perturbed-or-masked fraction "
      << FormatDouble(fraction) << "\n";
  return kExitOk;
}

struct WilcoxonArgs {
  Common common;
  std::string input;
};

// Header `first,second` or `id,first,second`; every row must match it.
std::vector<std::pair<double, double>> ReadPairs(Session& s,
                                                 const std::string& path) {
  std::istringstream in(s.Read(path));
  CsvReader reader(in);
  CsvRecord record;
  if (!reader.Next(record)) throw DataError(path + ": empty file");
  const std::size_t columns = record.fields.size();
  if (columns != 2 && columns != 3) {
    throw DataError(path + ": header must have 2 or 3 columns", record.line);
  }
  std::vector<std::pair<double, double>> pairs;
  while (reader.Next(record)) {
    if (record.fields.size() != columns) {
      throw DataError(path + ": expected " + std::to_string(columns) +
                          " columns, found " +
                          std::to_string(record.fields.size()),
                      record.line);
    }
    const std::size_t at = columns - 2;
    try {
      pairs.push_back({ParseDouble(record.fields[at], "first value"),
                       ParseDouble(record.fields[at + 1], "second value")});
    } catch (const DataError& e) {
      throw DataError(path + ": " + e.what(), record.line);
    }
  }
  return pairs;
}

int RunWilcoxon(const WilcoxonArgs& a, Session& s, std::ostream& out) {
  LoadConfigs(s, a.common);
  const auto pairs = ReadPairs(s, a.input);
  const WilcoxonResult r = WilcoxonSignedRank(pairs);
  const Json report = {{"n_pairs", pairs.size()},
                       {"n_effective", r.n_effective},
                       {"w_plus", r.w_plus},
                       {"w_minus", r.w_minus},
                       {"statistic", r.statistic},
                       {"p_two_sided", r.p_two_sided},
                       {"method", r.exact ? "exact" : "normal"}};
  s.Write("wilcoxon.json", report.dump(2) + "\n");
  s.Finish();
  out << "W " << FormatDouble(r.statistic) << ", p "
      << FormatDouble(r.p_two_sided) << " (" << (r.exact ? "exact" : "normal")
      << ")\n";
  return kExitOk;
}

struct GridArgs {
  Common common;
  NoiseInputs noise;
  std::string train;
  std::string test;
  std::string train_settings = "none,c,d,c+d";
  std::string test_settings = "none,c,d,c+d";
};

int RunGridVerb(const GridArgs& a, Session& s, std::ostream& out) {
  const Configs cfg = LoadConfigs(s, a.common);
  s.SetConfig(&cfg.attack, &cfg.train);
  s.SetSeed(cfg.attack.master_seed);
  const auto train_settings = ParseSettingList(a.train_settings);
  const auto test_settings = ParseSettingList(a.test_settings);
  AttackConfig probe = cfg.attack;
  probe.ApplyNoiseSetting(NoiseSetting::kCD);
  const LoadedNoise noise = LoadNoise(s, a.noise, probe, true);
  const TokenizedCorpus train = ReadCorpus(s, a.train);
  const TokenizedCorpus test = ReadCorpus(s, a.test);
  for (const auto& u : test) {
    if (train.Contains(u.id)) {
      throw DataError("train and test corpora share id '" + u.id + "'");
    }
  }
  const GridInputs inputs{train,        test,      noise.lexicon,
                          noise.index,  noise.map, cfg.attack,
                          cfg.train,    ThreadsFromEnv()};
  const auto cells = RunGrid(inputs, train_settings, test_settings);

  std::optional<double> clean_recall;
  for (const auto& c : cells) {
    if (c.train_noise == NoiseSetting::kNone &&
        c.test_noise == NoiseSetting::kNone) {
      clean_recall = c.report.recall;
    }
  }
  std::ostringstream tsv;
  tsv << "train_noise\ttest_noise\tauc\tprecision\trecall\tf1\tthreshold\t"
         "recall_change_pct\n";
  Json rows = Json::array();
  for (const auto& c : cells) {
    std::optional<double> change;
    if (clean_recall && *clean_recall != 0.0) {
      change = RelativeChange(*clean_recall, c.report.recall);
    }
    tsv << ToString(c.train_noise) << '\t' << ToString(c.test_noise) << '\t'
        << FormatDouble(c.report.auc) << '\t'
        << FormatDouble(c.report.precision) << '\t'
        << FormatDouble(c.report.recall) << '\t' << FormatDouble(c.report.f1)
        << '\t' << FormatDouble(c.report.threshold) << '\t'
        << (change ? FormatDouble(*change) : "") << '\n';
    Json row = {{"train_noise", std::string(ToString(c.train_noise))},
                {"test_noise", std::string(ToString(c.test_noise))},
                {"metrics", Json::parse(ReportToJson(c.report))}};
    row["recall_change_pct"] = change ? Json(*change) : Json(nullptr);
    rows.push_back(row);
  }
  s.Write("grid.tsv", tsv.str());
  s.Write("grid.json", rows.dump(2) + "\n");
  s.Finish();
  out << tsv.str();
  return kExitOk;
}

struct ReplayArgs {
  std::string manifest;
  std::string out_dir;
};

int RunReplay(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.manifest);
  if (!in) throw DataError("cannot read '" + a.manifest + "'");
  Json m;
  try {
    m = Json::parse(in);
  } catch (const Json::exception& e) {
    throw DataError(a.manifest + ": " + e.what());
  }
  if (m.value("version", "") != kVersion) {
    throw DataError("manifest was written by toxattack " +
                    m.value("version", std::string("?")) + ", this is " +
                    std::string(kVersion));
  }
  for (const auto& [path, sum] : m.at("inputs").items()) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    if (Checksum(buf.str()) != sum.get<std::string>()) {
      throw DataError("input '" + path + "' changed since the manifest");
    }
  }
  std::vector<std::string> argv = m.at("argv").get<std::vector<std::string>>();
  for (std::size_t i = 0; i + 1 < argv.size(); ++i) {
    if (argv[i] == "--out") argv[i + 1] = a.out_dir;
  }
  const int code = RunCli(argv, out, err);
  if (code != kExitOk) return code;
  for (const auto& [name, sum] : m.at("outputs").items()) {
    if (name == "manifest.json") continue;
    std::ifstream f(fs::path(a.out_dir) / name, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    if (Checksum(buf.str()) != sum.get<std::string>()) {
      throw DataError("replayed output '" + name + "' differs");
    }
  }
  out << "replay reproduced " << m.at("outputs").size() << " outputs\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Lexicon-guided adversarial attacks on toxicity classifiers",
               "toxattack");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  PrepareArgs prepare;
  auto* prepare_cmd =
      app.add_subcommand("prepare", "Preprocess and tokenize a raw corpus");
  AddCommon(prepare_cmd, prepare.common);
  prepare_cmd->add_option("--input", prepare.input, "Corpus JSONL or CSV")
      ->required();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Write the synthetic benchmark (background, train, test)");
  AddCommon(synth_cmd, synth.common);
  synth_cmd->add_option("--background-size", synth.background);
  synth_cmd->add_option("--train-size", synth.train);
  synth_cmd->add_option("--test-size", synth.test);

  BuildLexiconArgs lex;
  auto* lex_cmd = app.add_subcommand(
      "build-lexicon", "Rank tokens by logistic-regression coefficient");
  AddCommon(lex_cmd, lex.common);
  lex_cmd->add_option("--background", lex.background, "Labeled corpus")
      ->required();
  lex_cmd->add_option("--k", lex.k, "Maximum lexicon size")
      ->check(CLI::PositiveNumber);

  AttackArgs attack;
  auto* attack_cmd = app.add_subcommand("attack", "Noise a corpus");
  AddCommon(attack_cmd, attack.common);
  attack.noise.Add(attack_cmd);
  attack_cmd->add_option("--input", attack.input, "Corpus to noise")
      ->required();
  attack_cmd->add_option("--noise", attack.setting,
                         "none, c, d or c+d (default: from config)");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand(
      "train", "Train the logistic-regression baseline and tune its threshold");
  AddCommon(train_cmd, train.common);
  train.noise.Add(train_cmd);
  train_cmd->add_option("--input", train.input, "Labeled training corpus")
      ->required();
  train_cmd->add_option("--train-noise", train.train_noise,
                        "none, c, d or c+d");
  train_cmd->add_option("--epochs", train.epochs, "Overrides the config");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score and evaluate a corpus");
  AddCommon(eval_cmd, eval.common);
  eval_cmd->add_option("--input", eval.input, "Labeled test corpus")
      ->required();
  eval_cmd->add_option("--model", eval.model, "model.json from train");
  eval_cmd->add_option("--predictions", eval.predictions,
                       "External predictions CSV (id,score)");
  eval.threshold_option =
      eval_cmd->add_option("--threshold", eval.threshold,
                           "Overrides the model's training threshold");
  eval_cmd->add_option("--baseline", eval.baseline,
                       "Earlier metrics.json to report relative change against");

  EnsembleArgs ensemble;
  auto* ensemble_cmd =
      app.add_subcommand("ensemble", "Average two prediction files");
  AddCommon(ensemble_cmd, ensemble.common);
  ensemble_cmd->add_option("inputs", ensemble.inputs, "Two predictions CSVs")
      ->required()
      ->expected(2);

  DenoiserArgs denoiser;
  auto* denoiser_cmd = app.add_subcommand(
      "denoiser-data", "Generate token-aligned (noised, clean) pairs");
  AddCommon(denoiser_cmd, denoiser.common);
  denoiser.noise.Add(denoiser_cmd);
  denoiser_cmd->add_option("--input", denoiser.input, "Corpus")->required();
  denoiser_cmd->add_option("--noise-rate", denoiser.options.noise_rate)
      ->check(CLI::Range(0.0, 1.0));
  denoiser_cmd->add_option("--mask-rate", denoiser.options.mask_rate)
      ->check(CLI::Range(0.0, 1.0));

  WilcoxonArgs wilcoxon;
  auto* wilcoxon_cmd =
      app.add_subcommand("wilcoxon", "Wilcoxon signed-rank test on paired scores");
  AddCommon(wilcoxon_cmd, wilcoxon.common);
  wilcoxon_cmd->add_option("--input", wilcoxon.input,
                           "CSV with header first,second or id,first,second")
      ->required();

  GridArgs grid;
  auto* grid_cmd = app.add_subcommand(
      "grid", "Train-noise x test-noise experiment matrix");
  AddCommon(grid_cmd, grid.common);
  grid.noise.Add(grid_cmd);
  grid_cmd->add_option("--train", grid.train, "Training corpus")->required();
  grid_cmd->add_option("--test", grid.test, "Test corpus")->required();
  grid_cmd->add_option("--train-noise", grid.train_settings,
                       "Comma list of settings");
  grid_cmd->add_option("--test-noise", grid.test_settings,
                       "Comma list of settings");

  ReplayArgs replay;
  auto* replay_cmd = app.add_subcommand(
      "replay", "Rerun a command from its manifest and verify the outputs");
  replay_cmd->add_option("--manifest", replay.manifest)->required();
  replay_cmd->add_option("--out", replay.out_dir)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    if (chosen == replay_cmd) return RunReplay(replay, out, err);
    const std::map<CLI::App*, Common*> commons = {
        {prepare_cmd, &prepare.common},   {synth_cmd, &synth.common},
        {lex_cmd, &lex.common},           {attack_cmd, &attack.common},
        {train_cmd, &train.common},       {eval_cmd, &eval.common},
        {ensemble_cmd, &ensemble.common}, {denoiser_cmd, &denoiser.common},
        {wilcoxon_cmd, &wilcoxon.common}, {grid_cmd, &grid.common}};
    const Common* common = commons.at(chosen);
    Session session(chosen->get_name(), args, common->out_dir);
    if (chosen == prepare_cmd) return RunPrepare(prepare, session, out);
    if (chosen == synth_cmd) return RunSynth(synth, session, out);
    if (chosen == lex_cmd) return RunBuildLexicon(lex, session, out);
    if (chosen == attack_cmd) return RunAttack(attack, session, out);
    if (chosen == train_cmd) return RunTrain(train, session, out);
    if (chosen == eval_cmd) return RunEval(eval, session, out);
    if (chosen == ensemble_cmd) return RunEnsemble(ensemble, session, out);
    if (chosen == denoiser_cmd) return RunDenoiser(denoiser, session, out);
    if (chosen == wilcoxon_cmd) return RunWilcoxon(wilcoxon, session, out);
    return RunGridVerb(grid, session, out);
  } catch (const UsageError& e) {
    err << "toxattack " << chosen->get_name() << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "toxattack " << chosen->get_name() << ": " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "toxattack " << chosen->get_name() << ": " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace toxattack::cli
