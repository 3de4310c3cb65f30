#ifndef TOXATTACK_CORPUS_H_
#define TOXATTACK_CORPUS_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace toxattack {

enum class Label : unsigned char { kNonToxic = 0, kToxic = 1 };

inline int ToInt(Label label) { return label == Label::kToxic ? 1 : 0; }

struct Utterance {
  std::string id;
  std::string text;
  // Fraction of annotators that labeled the text toxic, in [0, 1].
  std::optional<double> toxicity;
};

struct TokenizedUtterance {
  std::string id;
  std::vector<std::string> tokens;
  std::optional<Label> label;
};

// Ordered records with unique ids. `Add` enforces the uniqueness and field
// invariants so that every Corpus in memory is valid.
template <typename Record>
class BasicCorpus {
 public:
  void Add(Record record);

  const std::vector<Record>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const Record& operator[](std::size_t i) const { return examples_[i]; }
  auto begin() const { return examples_.begin(); }
  auto end() const { return examples_.end(); }
  bool Contains(std::string_view id) const {
    return ids_.count(std::string(id)) != 0;
  }

 private:
  std::vector<Record> examples_;
  std::unordered_set<std::string> ids_;
};

using Corpus = BasicCorpus<Utterance>;
using TokenizedCorpus = BasicCorpus<TokenizedUtterance>;

template <>
void BasicCorpus<Utterance>::Add(Utterance record);
template <>
void BasicCorpus<TokenizedUtterance>::Add(TokenizedUtterance record);

enum class CorpusFormat { kJsonl, kCsv };

// Picks kCsv for a `.csv` suffix, kJsonl otherwise.
CorpusFormat FormatFromPath(std::string_view path);

// Errors carry the offending line number.
Corpus LoadCorpus(std::istream& in, CorpusFormat format);
void SaveCorpus(const Corpus& corpus, std::ostream& out, CorpusFormat format);

TokenizedCorpus LoadTokenizedCorpus(std::istream& in);
void SaveTokenizedCorpus(const TokenizedCorpus& corpus, std::ostream& out);

// toxic iff toxicity >= 0.5.
Label BinarizeLabel(double toxicity);

std::string StripUrls(std::string_view text);
std::string CollapseRepeats(std::string_view text);
std::string Preprocess(std::string_view text);

// Words are maximal runs of letters, combining marks, digits, apostrophes
// and asterisks; any other non-whitespace character is a token by itself.
std::vector<std::string> Tokenize(std::string_view text);

// Preprocess + tokenize + binarize every utterance.
TokenizedUtterance PrepareUtterance(const Utterance& utterance);
TokenizedCorpus PrepareCorpus(const Corpus& corpus);

// Loads either a raw corpus (JSONL or CSV) or a tokenized corpus JSONL,
// sniffing the first record for a "tokens" field. Raw input is prepared.
TokenizedCorpus LoadAnyCorpus(std::istream& in, CorpusFormat format);

}  // namespace toxattack

#endif  // TOXATTACK_CORPUS_H_
