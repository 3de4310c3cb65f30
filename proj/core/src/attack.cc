#include "toxattack/attack.h"

#include <algorithm>
#include <memory>
#include <thread>

#include "toxattack/error.h"
#include "toxattack/text.h"

namespace toxattack {
namespace {

PerturbOp ParseOp(std::string_view name) {
  if (name == "scramble") return PerturbOp::kScramble;
  if (name == "homoglyph") return PerturbOp::kHomoglyph;
  if (name == "near_neighbor") return PerturbOp::kNearNeighbor;
  throw DataError("unknown perturbation op '" + std::string(name) + "'");
}

std::string_view Trimmed(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

constexpr std::string_view kConfigKeys[] = {
    "master_seed",         "enabled_ops",         "homoglyph_char_prob",
    "nn_similarity_threshold", "nn_literal_reading", "obfuscation_enabled",
    "distractors_enabled", "distractor_parts",
};

// std::vector<bool> cannot back a span.
std::unique_ptr<bool[]> LexiconMask(std::span<const std::string> tokens,
                                    const ToxicLexicon& lexicon) {
  auto mask = std::make_unique<bool[]>(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    mask[i] = lexicon.Contains(tokens[i]);
  }
  return mask;
}

}  // namespace

std::string_view ToString(PerturbOp op) {
  switch (op) {
    case PerturbOp::kScramble:
      return "scramble";
    case PerturbOp::kHomoglyph:
      return "homoglyph";
    case PerturbOp::kNearNeighbor:
      return "near_neighbor";
  }
  return "?";
}

NoiseSetting ParseNoiseSetting(std::string_view text) {
  if (text == "none") return NoiseSetting::kNone;
  if (text == "c") return NoiseSetting::kC;
  if (text == "d") return NoiseSetting::kD;
  if (text == "c+d") return NoiseSetting::kCD;
  throw DataError("unknown noise setting '" + std::string(text) +
                  "' (expected none, c, d or c+d)");
}

std::string_view ToString(NoiseSetting setting) {
  switch (setting) {
    case NoiseSetting::kNone:
      return "none";
    case NoiseSetting::kC:
      return "c";
    case NoiseSetting::kD:
      return "d";
    case NoiseSetting::kCD:
      return "c+d";
  }
  return "?";
}

void AttackConfig::Validate() const {
  if (!(homoglyph_char_prob >= 0.0 && homoglyph_char_prob <= 1.0)) {
    throw DataError("homoglyph_char_prob must be in [0, 1]");
  }
  if (!(nn_similarity_threshold >= 0.0 && nn_similarity_threshold <= 1.0)) {
    throw DataError("nn_similarity_threshold must be in [0, 1]");
  }
  if (obfuscation_enabled && enabled_ops.empty()) {
    throw DataError("enabled_ops must be non-empty when obfuscation is on");
  }
}

void AttackConfig::ApplyNoiseSetting(NoiseSetting setting) {
  obfuscation_enabled =
      setting == NoiseSetting::kC || setting == NoiseSetting::kCD;
  distractors_enabled =
      setting == NoiseSetting::kD || setting == NoiseSetting::kCD;
}

std::span<const std::string_view> AttackConfig::Keys() { return kConfigKeys; }

AttackConfig AttackConfig::FromKeyValues(const KeyValues& kv) {
  AttackConfig c;
  c.master_seed = kv.GetUint64("master_seed", c.master_seed);
  if (kv.Has("enabled_ops")) {
    bool seen[3] = {false, false, false};
    const std::string text = kv.GetString("enabled_ops", "");
    std::string_view list = text;
    while (!list.empty()) {
      const auto comma = list.find(',');
      const auto name = Trimmed(list.substr(0, comma));
      if (!name.empty()) seen[static_cast<int>(ParseOp(name))] = true;
      if (comma == std::string_view::npos) break;
      list.remove_prefix(comma + 1);
    }
    c.enabled_ops.clear();
    for (int i = 0; i < 3; ++i) {
      if (seen[i]) c.enabled_ops.push_back(static_cast<PerturbOp>(i));
    }
  }
  c.homoglyph_char_prob =
      kv.GetDouble("homoglyph_char_prob", c.homoglyph_char_prob);
  c.nn_similarity_threshold =
      kv.GetDouble("nn_similarity_threshold", c.nn_similarity_threshold);
  c.nn_literal_reading = kv.GetBool("nn_literal_reading", c.nn_literal_reading);
  c.obfuscation_enabled =
      kv.GetBool("obfuscation_enabled", c.obfuscation_enabled);
  c.distractors_enabled =
      kv.GetBool("distractors_enabled", c.distractors_enabled);
  const std::string parts = kv.GetString("distractor_parts", "both");
  if (parts == "both") {
    c.distractor_parts = DistractorParts::kBoth;
  } else if (parts == "longer") {
    c.distractor_parts = DistractorParts::kLonger;
  } else {
    throw DataError("distractor_parts must be 'both' or 'longer'");
  }
  c.Validate();
  return c;
}

void AttackConfig::Write(std::ostream& out) const {
  out << "master_seed = " << master_seed << '\n' << "enabled_ops = ";
  for (std::size_t i = 0; i < enabled_ops.size(); ++i) {
    out << (i ? "," : "") << ToString(enabled_ops[i]);
  }
  out << '\n'
      << "homoglyph_char_prob = " << FormatDouble(homoglyph_char_prob) << '\n'
      << "nn_similarity_threshold = " << FormatDouble(nn_similarity_threshold)
      << '\n'
      << "nn_literal_reading = " << (nn_literal_reading ? "true" : "false")
      << '\n'
      << "obfuscation_enabled = " << (obfuscation_enabled ? "true" : "false")
      << '\n'
      << "distractors_enabled = " << (distractors_enabled ? "true" : "false")
      << '\n'
      << "distractor_parts = "
      << (distractor_parts == DistractorParts::kBoth ? "both" : "longer")
      << '\n';
}

std::string Scramble(std::string_view token, DeterministicRng& rng) {
  std::u32string chars = DecodeUtf8(token);
  if (chars.size() < 3) return std::string(token);
  const std::size_t interior_end = chars.size() - 1;
  for (std::size_t start = 1; start < interior_end; start += 3) {
    const std::size_t stop = std::min(start + 3, interior_end);
    rng.Shuffle(std::span<char32_t>(chars.data() + start, stop - start));
  }
  return EncodeUtf8(chars);
}

std::string HomoglyphSubstitute(std::string_view token,
                                const ConfusionMap& map, double p,
                                DeterministicRng& rng) {
  std::u32string chars = DecodeUtf8(token);
  for (char32_t& c : chars) {
    if (!rng.Bernoulli(p)) continue;
    const auto replacements = map.Lookup(c);
    if (replacements.empty()) continue;
    c = replacements[rng.Uniform(replacements.size())];
  }
  return EncodeUtf8(chars);
}

std::array<TokenRun, 2> FindDistractorRuns(std::span<const bool> toxic,
                                           std::size_t split) {
  const std::size_t n = toxic.size();
  // run_from[i]: number of consecutive non-toxic positions starting at i.
  std::vector<std::size_t> run_from(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) {
    run_from[i] = toxic[i] ? 0 : run_from[i + 1] + 1;
  }
  const auto best_in = [&](std::size_t lo, std::size_t hi) {
    TokenRun best;
    for (std::size_t i = lo; i < hi; ++i) {
      if (run_from[i] > best.length) best = {i, run_from[i]};
    }
    return best;
  };
  return {best_in(0, split), best_in(split, n)};
}

std::vector<std::string> InjectDistractors(std::span<const std::string> tokens,
                                           std::span<const bool> toxic,
                                           DeterministicRng& rng,
                                           DistractorParts parts) {
  if (toxic.size() != tokens.size()) {
    throw DataError("toxicity mask is not aligned with the tokens");
  }
  std::vector<std::string> out(tokens.begin(), tokens.end());
  if (tokens.size() < 2) return out;
  const std::size_t split = 1 + rng.Uniform(tokens.size() - 1);
  auto runs = FindDistractorRuns(toxic, split);
  if (parts == DistractorParts::kLonger) {
    if (runs[1].length > runs[0].length) runs[0] = runs[1];
    runs[1] = TokenRun{};
  }
  for (const auto& run : runs) {
    for (std::size_t i = run.start; i < run.start + run.length; ++i) {
      out.push_back(tokens[i]);
    }
  }
  return out;
}

std::vector<std::string> InjectDistractors(std::span<const std::string> tokens,
                                           const ToxicLexicon& lexicon,
                                           DeterministicRng& rng,
                                           DistractorParts parts) {
  const auto mask = LexiconMask(tokens, lexicon);
  return InjectDistractors(
      tokens, std::span<const bool>(mask.get(), tokens.size()), rng, parts);
}

Attack::Attack(AttackConfig config, const ToxicLexicon& lexicon,
               const NeighborIndex& base_vocab, const ConfusionMap& map)
    : config_(std::move(config)),
      lexicon_(lexicon),
      base_vocab_(base_vocab),
      map_(map) {
  config_.Validate();
}

std::string Attack::ApplyOp(PerturbOp op, std::string_view token,
                            DeterministicRng& rng) const {
  switch (op) {
    case PerturbOp::kScramble:
      return Scramble(token, rng);
    case PerturbOp::kHomoglyph:
      return HomoglyphSubstitute(token, map_, config_.homoglyph_char_prob,
                                 rng);
    case PerturbOp::kNearNeighbor:
      return NearNeighborReplace(
          token, base_vocab_,
          {config_.nn_similarity_threshold, config_.nn_literal_reading});
  }
  return std::string(token);
}

std::string Attack::PerturbToken(std::string_view token,
                                 DeterministicRng& rng) const {
  const auto& ops = config_.enabled_ops;
  if (ops.empty()) return std::string(token);
  const PerturbOp op = ops.size() == 1 ? ops.front() : ops[rng.Uniform(ops.size())];
  return ApplyOp(op, token, rng);
}

TokenizedUtterance Attack::NoiseUtterance(const TokenizedUtterance& utterance,
                                          DeterministicRng& rng) const {
  TokenizedUtterance out = utterance;
  // Membership is decided on the original tokens, before obfuscation.
  const auto toxic = LexiconMask(out.tokens, lexicon_);
  if (config_.obfuscation_enabled) {
    for (std::size_t i = 0; i < out.tokens.size(); ++i) {
      if (toxic[i]) out.tokens[i] = PerturbToken(out.tokens[i], rng);
    }
  }
  if (config_.distractors_enabled) {
    out.tokens = InjectDistractors(
        out.tokens, std::span<const bool>(toxic.get(), out.tokens.size()), rng,
        config_.distractor_parts);
  }
  return out;
}

TokenizedCorpus Attack::NoiseCorpus(const TokenizedCorpus& corpus,
                                    unsigned threads) const {
  const std::size_t n = corpus.size();
  std::vector<TokenizedUtterance> noised(n);
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      DeterministicRng rng(StableHash(config_.master_seed, corpus[i].id));
      noised[i] = NoiseUtterance(corpus[i], rng);
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t begin = 0; begin < n; begin += chunk) {
      pool.emplace_back(work, begin, std::min(n, begin + chunk));
    }
  }
  TokenizedCorpus out;
  for (auto& u : noised) out.Add(std::move(u));
  return out;
}

std::vector<std::string> BaseVocabularyTokens(const Vocabulary& background,
                                              const ToxicLexicon& lexicon) {
  std::vector<std::string> tokens;
  for (const auto& token : background.tokens()) {
    if (!lexicon.Contains(token)) tokens.push_back(token);
  }
  return tokens;
}

std::vector<DenoiserPair> GenerateDenoiserPairs(const TokenizedCorpus& corpus,
                                                const DenoiserOptions& options,
                                                const Attack& attack,
                                                DeterministicRng& rng,
                                                DenoiserStats* stats) {
  if (!(options.noise_rate >= 0.0 && options.noise_rate <= 1.0) ||
      !(options.mask_rate >= 0.0 && options.mask_rate <= 1.0)) {
    throw DataError("noise and mask rates must be in [0, 1]");
  }
  DenoiserStats local;
  std::vector<DenoiserPair> pairs;
  pairs.reserve(corpus.size());
  std::vector<char> touched;
  for (const auto& u : corpus) {
    DenoiserPair pair{u.tokens, u.tokens};
    touched.assign(u.tokens.size(), 0);
    for (std::size_t i = 0; i < pair.noised.size(); ++i) {
      if (rng.Bernoulli(options.noise_rate)) {
        pair.noised[i] = attack.PerturbToken(pair.noised[i], rng);
        touched[i] = 1;
        ++local.perturbed;
      }
    }
    for (std::size_t i = 0; i < pair.noised.size(); ++i) {
      if (rng.Bernoulli(options.mask_rate)) {
        pair.noised[i] = std::string(kMaskToken);
        touched[i] = 1;
        ++local.masked;
      }
    }
    for (std::size_t i = 0; i < pair.noised.size(); ++i) {
      local.perturbed_or_masked += touched[i];
      local.changed += pair.noised[i] != pair.clean[i];
    }
    local.tokens += u.tokens.size();
    pairs.push_back(std::move(pair));
  }
  if (stats != nullptr) *stats = local;
  return pairs;
}

}  // namespace toxattack
