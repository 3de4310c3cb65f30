#include "toxattack/lexicon.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>

#include "toxattack/error.h"
#include "toxattack/text.h"

namespace toxattack {
namespace {

std::optional<std::string_view> HeaderValue(std::string_view header,
                                            std::string_view key) {
  std::size_t pos = 0;
  while ((pos = header.find(key, pos)) != std::string_view::npos) {
    if (pos == 0 || header[pos - 1] == ' ' || header[pos - 1] == '#') {
      auto value = header.substr(pos + key.size());
      return value.substr(0, value.find(' '));
    }
    pos += key.size();
  }
  return std::nullopt;
}

}  // namespace

ToxicLexicon::ToxicLexicon(std::vector<LexiconEntry> entries, double l2,
                           std::size_t k)
    : entries_(std::move(entries)), l2_(l2), k_(k) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.token.empty()) throw DataError("empty lexicon token");
    if (!(e.coefficient > 0.0) || !std::isfinite(e.coefficient)) {
      throw DataError("lexicon coefficient for '" + e.token +
                      "' is not strictly positive");
    }
    if (i > 0 && e.coefficient > entries_[i - 1].coefficient) {
      throw DataError("lexicon coefficients increase at rank " +
                      std::to_string(i + 1));
    }
    if (!members_.insert(e.token).second) {
      throw DataError("duplicate lexicon token '" + e.token + "'");
    }
  }
}

ToxicLexicon LexiconFromModel(const LogRegModel& model, std::size_t k,
                              double l2) {
  if (k < 1) throw DataError("lexicon size k must be >= 1");
  const auto& vocab = model.vocabulary();
  std::vector<LexiconEntry> positive;
  for (std::uint32_t i = 0; i < vocab.size(); ++i) {
    if (model.weights()[i] > 0.0) {
      positive.push_back({vocab.Token(i), model.weights()[i]});
    }
  }
  const auto by_rank = [](const LexiconEntry& a, const LexiconEntry& b) {
    if (a.coefficient != b.coefficient) return a.coefficient > b.coefficient;
    return a.token < b.token;
  };
  const std::size_t keep = std::min(k, positive.size());
  std::partial_sort(positive.begin(), positive.begin() + keep, positive.end(),
                    by_rank);
  positive.resize(keep);
  return ToxicLexicon(std::move(positive), l2, k);
}

ToxicLexicon BuildLexicon(const TokenizedCorpus& background, std::size_t k,
                          const TrainConfig& config) {
  const LogRegModel model = TrainOnCorpus(background, config);
  return LexiconFromModel(model, k, config.l2);
}

void SaveLexicon(const ToxicLexicon& lexicon, std::ostream& out) {
  out << "# l2=" << FormatDouble(lexicon.l2()) << " k=" << lexicon.k() << '\n';
  std::size_t rank = 1;
  for (const auto& e : lexicon.entries()) {
    out << rank++ << '\t' << e.token << '\t' << FormatDouble(e.coefficient)
        << '\n';
  }
}

ToxicLexicon LoadLexicon(std::istream& in) {
  std::vector<LexiconEntry> entries;
  double l2 = 0.0;
  std::size_t k = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      if (line.front() == '#') {
        // Header: "# l2=<val> k=<val>"; other comments are ignored.
        if (auto v = HeaderValue(line, "l2=")) l2 = ParseDouble(*v, "header l2");
        if (auto v = HeaderValue(line, "k=")) {
          auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), k);
          if (ec != std::errc() || ptr != v->data() + v->size()) {
            throw DataError("header k is not an integer");
          }
        }
        continue;
      }
      const auto tab1 = line.find('\t');
      const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                  : line.find('\t', tab1 + 1);
      if (tab2 == std::string::npos ||
          line.find('\t', tab2 + 1) != std::string::npos) {
        throw DataError("expected rank<TAB>token<TAB>coefficient");
      }
      const std::string rank_text = line.substr(0, tab1);
      std::size_t rank = 0;
      auto [ptr, ec] = std::from_chars(
          rank_text.data(), rank_text.data() + rank_text.size(), rank);
      if (ec != std::errc() || ptr != rank_text.data() + rank_text.size()) {
        throw DataError("rank is not an integer");
      }
      if (rank != entries.size() + 1) {
        throw DataError("expected rank " + std::to_string(entries.size() + 1) +
                        ", found " + rank_text);
      }
      std::string token = line.substr(tab1 + 1, tab2 - tab1 - 1);
      if (!IsValidUtf8(token)) throw DataError("token is not valid UTF-8");
      const double coefficient =
          ParseDouble(line.substr(tab2 + 1), "coefficient");
      entries.push_back({std::move(token), coefficient});
      // Validate incrementally so the error carries this line number.
      const auto& e = entries.back();
      if (!(e.coefficient > 0.0)) {
        throw DataError("coefficient must be strictly positive");
      }
      if (entries.size() > 1 &&
          e.coefficient > entries[entries.size() - 2].coefficient) {
        throw DataError("coefficients must be non-increasing by rank");
      }
    } catch (const DataError& e) {
      throw DataError(e.what(), line_no);
    }
  }
  if (k == 0) k = std::max<std::size_t>(entries.size(), 1);
  return ToxicLexicon(std::move(entries), l2, k);
}

}  // namespace toxattack
