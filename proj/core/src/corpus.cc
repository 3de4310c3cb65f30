#include "toxattack/corpus.h"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "toxattack/csv.h"
#include "toxattack/error.h"
#include "toxattack/text.h"

namespace toxattack {
namespace {

using nlohmann::json;

void ValidateToxicity(double toxicity) {
  if (!(toxicity >= 0.0 && toxicity <= 1.0)) {
    throw DataError("toxicity " + FormatDouble(toxicity) +
                    " outside [0, 1]");
  }
}

bool IsInWord(char32_t c) {
  return IsWordCharacter(c) || c == U'\'' || c == U'’' || c == U'*';
}

bool StartsWithUrlPrefix(std::u32string_view word) {
  return word.starts_with(U"http://") || word.starts_with(U"https://") ||
         word.starts_with(U"www.");
}

// Splits on Unicode whitespace.
std::vector<std::u32string_view> SplitWords(std::u32string_view text) {
  std::vector<std::u32string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsWhitespace(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !IsWhitespace(text[i])) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

std::u32string StripUrlsImpl(std::u32string_view text) {
  std::u32string out;
  for (auto word : SplitWords(text)) {
    if (StartsWithUrlPrefix(word)) continue;
    if (!out.empty()) out.push_back(U' ');
    out.append(word);
  }
  return out;
}

std::u32string CollapseRepeatsImpl(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && text[j] == text[i]) ++j;
    const std::size_t run = j - i;
    out.append(run >= 4 ? 1 : run, text[i]);
    i = j;
  }
  return out;
}

Utterance ParseJsonUtterance(const std::string& line, std::size_t line_no) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!record.is_object()) throw DataError("record is not an object", line_no);
  auto id = record.find("id");
  auto text = record.find("text");
  if (id == record.end() || !id->is_string()) {
    throw DataError("missing string field 'id'", line_no);
  }
  if (text == record.end() || !text->is_string()) {
    throw DataError("missing string field 'text'", line_no);
  }
  Utterance u{id->get<std::string>(), text->get<std::string>(), std::nullopt};
  if (auto tox = record.find("toxicity");
      tox != record.end() && !tox->is_null()) {
    if (!tox->is_number()) {
      throw DataError("field 'toxicity' is not a number", line_no);
    }
    u.toxicity = tox->get<double>();
  }
  return u;
}

template <typename Record>
void AddAt(BasicCorpus<Record>& corpus, Record record, std::size_t line_no) {
  try {
    corpus.Add(std::move(record));
  } catch (const DataError& e) {
    throw DataError(e.what(), line_no);
  }
}

Corpus LoadJsonl(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!IsValidUtf8(line)) throw DataError("invalid UTF-8", line_no);
    AddAt(corpus, ParseJsonUtterance(line, line_no), line_no);
  }
  return corpus;
}

Corpus LoadCsv(std::istream& in) {
  Corpus corpus;
  CsvReader reader(in);
  CsvRecord record;
  if (!reader.Next(record)) return corpus;
  const auto& header = record.fields;
  const bool has_toxicity = header.size() == 3 && header[2] == "toxicity";
  if (header.size() < 2 || header[0] != "id" || header[1] != "text" ||
      (header.size() == 3 && !has_toxicity) || header.size() > 3) {
    throw DataError("expected header 'id,text,toxicity'", record.line);
  }
  while (reader.Next(record)) {
    if (record.fields.size() != header.size()) {
      throw DataError("expected " + std::to_string(header.size()) +
                          " fields, found " +
                          std::to_string(record.fields.size()),
                      record.line);
    }
    for (const auto& f : record.fields) {
      if (!IsValidUtf8(f)) throw DataError("invalid UTF-8", record.line);
    }
    Utterance u{record.fields[0], record.fields[1], std::nullopt};
    if (has_toxicity && !record.fields[2].empty()) {
      try {
        u.toxicity = ParseDouble(record.fields[2], "toxicity");
      } catch (const DataError& e) {
        throw DataError(e.what(), record.line);
      }
    }
    AddAt(corpus, std::move(u), record.line);
  }
  return corpus;
}

TokenizedUtterance ParseTokenized(const json& record, std::size_t line_no) {
  if (!record.is_object()) throw DataError("record is not an object", line_no);
  auto id = record.find("id");
  auto tokens = record.find("tokens");
  if (id == record.end() || !id->is_string()) {
    throw DataError("missing string field 'id'", line_no);
  }
  if (tokens == record.end() || !tokens->is_array()) {
    throw DataError("missing array field 'tokens'", line_no);
  }
  TokenizedUtterance u{id->get<std::string>(), {}, std::nullopt};
  for (const auto& t : *tokens) {
    if (!t.is_string()) throw DataError("non-string token", line_no);
    u.tokens.push_back(t.get<std::string>());
  }
  if (auto label = record.find("label");
      label != record.end() && !label->is_null()) {
    if (!label->is_number_integer() ||
        (label->get<int>() != 0 && label->get<int>() != 1)) {
      throw DataError("field 'label' must be 0 or 1", line_no);
    }
    u.label = label->get<int>() == 1 ? Label::kToxic : Label::kNonToxic;
  }
  return u;
}

}  // namespace

template <>
void BasicCorpus<Utterance>::Add(Utterance record) {
  if (record.id.empty()) throw DataError("empty utterance id");
  if (record.toxicity) ValidateToxicity(*record.toxicity);
  if (!ids_.insert(record.id).second) {
    throw DataError("duplicate id '" + record.id + "'");
  }
  examples_.push_back(std::move(record));
}

template <>
void BasicCorpus<TokenizedUtterance>::Add(TokenizedUtterance record) {
  if (record.id.empty()) throw DataError("empty utterance id");
  for (const auto& token : record.tokens) {
    if (token.empty()) {
      throw DataError("empty token in utterance '" + record.id + "'");
    }
    for (char32_t c : DecodeUtf8(token)) {
      if (IsWhitespace(c)) {
        throw DataError("token contains whitespace in utterance '" +
                        record.id + "'");
      }
    }
  }
  if (!ids_.insert(record.id).second) {
    throw DataError("duplicate id '" + record.id + "'");
  }
  examples_.push_back(std::move(record));
}

CorpusFormat FormatFromPath(std::string_view path) {
  return path.ends_with(".csv") ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

Corpus LoadCorpus(std::istream& in, CorpusFormat format) {
  return format == CorpusFormat::kCsv ? LoadCsv(in) : LoadJsonl(in);
}

void SaveCorpus(const Corpus& corpus, std::ostream& out, CorpusFormat format) {
  if (format == CorpusFormat::kCsv) {
    out << "id,text,toxicity\n";
    for (const auto& u : corpus) {
      out << CsvEscape(u.id) << ',' << CsvEscape(u.text) << ',';
      if (u.toxicity) out << FormatDouble(*u.toxicity);
      out << '\n';
    }
    return;
  }
  for (const auto& u : corpus) {
    json record = {{"id", u.id}, {"text", u.text}};
    if (u.toxicity) record["toxicity"] = *u.toxicity;
    out << record.dump() << '\n';
  }
}

TokenizedCorpus LoadTokenizedCorpus(std::istream& in) {
  TokenizedCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!IsValidUtf8(line)) throw DataError("invalid UTF-8", line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    AddAt(corpus, ParseTokenized(record, line_no), line_no);
  }
  return corpus;
}

void SaveTokenizedCorpus(const TokenizedCorpus& corpus, std::ostream& out) {
  for (const auto& u : corpus) {
    json record = {{"id", u.id}, {"tokens", u.tokens}};
    if (u.label) record["label"] = ToInt(*u.label);
    out << record.dump() << '\n';
  }
}

Label BinarizeLabel(double toxicity) {
  ValidateToxicity(toxicity);
  return toxicity >= 0.5 ? Label::kToxic : Label::kNonToxic;
}

std::string StripUrls(std::string_view text) {
  return EncodeUtf8(StripUrlsImpl(DecodeUtf8(text)));
}

std::string CollapseRepeats(std::string_view text) {
  return EncodeUtf8(CollapseRepeatsImpl(DecodeUtf8(text)));
}

std::string Preprocess(std::string_view text) {
  std::u32string chars = DecodeUtf8(text);
  for (char32_t& c : chars) c = ToLower(c);
  // The second URL pass catches links that only appear once repeats are
  // collapsed ("hhhhttp://x"), which keeps Preprocess idempotent.
  return EncodeUtf8(StripUrlsImpl(CollapseRepeatsImpl(StripUrlsImpl(chars))));
}

std::vector<std::string> Tokenize(std::string_view text) {
  const std::u32string chars = DecodeUtf8(text);
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < chars.size()) {
    const char32_t c = chars[i];
    if (IsWhitespace(c)) {
      ++i;
    } else if (IsInWord(c)) {
      std::size_t j = i;
      while (j < chars.size() && IsInWord(chars[j])) ++j;
      tokens.push_back(EncodeUtf8(std::u32string_view(chars).substr(i, j - i)));
      i = j;
    } else {
      tokens.push_back(EncodeUtf8(c));
      ++i;
    }
  }
  return tokens;
}

TokenizedUtterance PrepareUtterance(const Utterance& utterance) {
  TokenizedUtterance out{utterance.id, Tokenize(Preprocess(utterance.text)),
                         std::nullopt};
  if (utterance.toxicity) out.label = BinarizeLabel(*utterance.toxicity);
  return out;
}

TokenizedCorpus PrepareCorpus(const Corpus& corpus) {
  TokenizedCorpus out;
  for (const auto& u : corpus) out.Add(PrepareUtterance(u));
  return out;
}

TokenizedCorpus LoadAnyCorpus(std::istream& in, CorpusFormat format) {
  if (format == CorpusFormat::kCsv) return PrepareCorpus(LoadCorpus(in, format));
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  bool tokenized = false;
  std::istringstream lines(content);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json first = json::parse(line, nullptr, /*allow_exceptions=*/false);
    tokenized = first.is_object() && first.contains("tokens");
    break;
  }
  std::istringstream again(content);
  if (tokenized) return LoadTokenizedCorpus(again);
  return PrepareCorpus(LoadCorpus(again, CorpusFormat::kJsonl));
}

}  // namespace toxattack
