#include <sstream>

#include <gtest/gtest.h>

#include "toxattack/corpus.h"
#include "toxattack/error.h"
#include "toxattack/rng.h"
#include "toxattack/text.h"

namespace toxattack {
namespace {

using Tokens = std::vector<std::string>;

TEST(StripUrls, Examples) {
  EXPECT_EQ(StripUrls("see http://x.y now"), "see now");
  EXPECT_EQ(StripUrls("no links here"), "no links here");
  EXPECT_EQ(StripUrls("www.a.b"), "");
  EXPECT_EQ(StripUrls("a https://q  b"), "a b");
}

TEST(CollapseRepeats, Examples) {
  EXPECT_EQ(CollapseRepeats("stupiiiiddddd"), "stupid");
  EXPECT_EQ(CollapseRepeats("iidiot"), "iidiot");
  EXPECT_EQ(CollapseRepeats("loool"), "loool");
  EXPECT_EQ(CollapseRepeats("ééééé"), "é");
}

TEST(Preprocess, Examples) {
  EXPECT_EQ(Preprocess("SEE http://a STUPIIIID"), "see stupid");
  EXPECT_EQ(Preprocess(""), "");
  EXPECT_EQ(Preprocess("Iidiot"), "iidiot");
}

TEST(Preprocess, RepeatsCanRevealAUrl) {
  // Collapsing turns "wwww." into "w." which is not a link, but a collapsed
  // run inside a scheme can produce one; the result must still be a fixpoint.
  const std::string once = Preprocess("x htttttp://a y");
  EXPECT_EQ(Preprocess(once), once);
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(Tokenize("s*ut up!"), (Tokens{"s*ut", "up", "!"}));
  EXPECT_EQ(Tokenize(""), Tokens{});
  EXPECT_EQ(Tokenize("ídíot"), Tokens{"ídíot"});
  EXPECT_EQ(Tokenize("don't…go"), (Tokens{"don't", "…", "go"}));
  EXPECT_EQ(Tokenize("a,,b"), (Tokens{"a", ",", ",", "b"}));
}

TEST(Label, Binarize) {
  EXPECT_EQ(BinarizeLabel(0.5), Label::kToxic);
  EXPECT_EQ(BinarizeLabel(0.49), Label::kNonToxic);
  EXPECT_THROW(BinarizeLabel(1.5), DataError);
}

TEST(Corpus, RejectsDuplicatesAndBadToxicity) {
  Corpus c;
  c.Add({"a", "x", 0.1});
  EXPECT_THROW(c.Add({"a", "y", std::nullopt}), DataError);
  EXPECT_THROW(c.Add({"b", "y", -0.1}), DataError);
  EXPECT_THROW(c.Add({"", "y", std::nullopt}), DataError);
}

TEST(Corpus, JsonlErrorsCarryLine) {
  std::istringstream in(
      "{\"id\":\"a\",\"text\":\"hi\"}\n{\"id\":\"b\",\"text\":\"x\","
      "\"toxicity\":3}\n");
  try {
    LoadCorpus(in, CorpusFormat::kJsonl);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream missing("{\"id\":\"a\"}\n");
  EXPECT_THROW(LoadCorpus(missing, CorpusFormat::kJsonl), DataError);
  std::istringstream garbage("{not json\n");
  EXPECT_THROW(LoadCorpus(garbage, CorpusFormat::kJsonl), DataError);
}

TEST(Corpus, CsvHeaderAndEmptyToxicity) {
  std::istringstream in("id,text,toxicity\na,\"x, y\",\nb,z,0.7\n");
  const Corpus c = LoadCorpus(in, CorpusFormat::kCsv);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_FALSE(c[0].toxicity.has_value());
  EXPECT_EQ(c[0].text, "x, y");
  EXPECT_EQ(*c[1].toxicity, 0.7);
  std::istringstream bad("id,body\n");
  EXPECT_THROW(LoadCorpus(bad, CorpusFormat::kCsv), DataError);
  std::istringstream short_row("id,text,toxicity\na\n");
  EXPECT_THROW(LoadCorpus(short_row, CorpusFormat::kCsv), DataError);
}

TEST(Corpus, FormatFromPath) {
  EXPECT_EQ(FormatFromPath("x/train.csv"), CorpusFormat::kCsv);
  EXPECT_EQ(FormatFromPath("train.jsonl"), CorpusFormat::kJsonl);
}

std::string RandomText(DeterministicRng& rng) {
  static const std::vector<std::string> pieces = {
      "a",  "B", "é", "а", " ", "  ", "\t", "!", "*", "'", "’",
      "http://x.y", "www.z", "ooooo", "́", ",", "7", "\n", "\""};
  std::string text;
  const auto n = rng.Uniform(12);
  for (std::uint64_t i = 0; i < n; ++i) text += pieces[rng.Uniform(pieces.size())];
  return text;
}

TEST(Corpus, RoundTripBothFormats) {
  DeterministicRng rng(3);
  Corpus c;
  for (int i = 0; i < 200; ++i) {
    std::optional<double> tox;
    if (rng.Bernoulli(0.7)) tox = rng.UniformReal();
    c.Add({"id-" + std::to_string(i), RandomText(rng), tox});
  }
  for (CorpusFormat f : {CorpusFormat::kJsonl, CorpusFormat::kCsv}) {
    std::stringstream buf;
    SaveCorpus(c, buf, f);
    const Corpus back = LoadCorpus(buf, f);
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_EQ(back[i].id, c[i].id);
      EXPECT_EQ(back[i].text, c[i].text);
      EXPECT_EQ(back[i].toxicity, c[i].toxicity);
    }
  }
}

TEST(Corpus, TokenizedRoundTripAndSniffing) {
  TokenizedCorpus c;
  c.Add({"a", {"x", "\"q\""}, Label::kToxic});
  c.Add({"b", {}, std::nullopt});
  std::stringstream buf;
  SaveTokenizedCorpus(c, buf);
  const std::string text = buf.str();
  std::istringstream in1(text);
  const TokenizedCorpus back = LoadTokenizedCorpus(in1);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].tokens, c[0].tokens);
  EXPECT_EQ(back[0].label, Label::kToxic);
  EXPECT_FALSE(back[1].label.has_value());
  std::istringstream in2(text);
  EXPECT_EQ(LoadAnyCorpus(in2, CorpusFormat::kJsonl).size(), 2u);

  std::istringstream raw("{\"id\":\"r\",\"text\":\"Hi THERE!\",\"toxicity\":0.6}\n");
  const TokenizedCorpus prepared = LoadAnyCorpus(raw, CorpusFormat::kJsonl);
  EXPECT_EQ(prepared[0].tokens, (Tokens{"hi", "there", "!"}));
  EXPECT_EQ(prepared[0].label, Label::kToxic);
}

TEST(CorpusProperty, PreprocessTokenizeInvariants) {
  DeterministicRng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::string text = RandomText(rng);
    const std::string once = Preprocess(text);
    EXPECT_EQ(Preprocess(once), once) << text;

    const std::string collapsed = CollapseRepeats(text);
    EXPECT_EQ(CollapseRepeats(collapsed), collapsed);
    const std::u32string cps = DecodeUtf8(collapsed);
    for (std::size_t i = 0; i + 3 < cps.size(); ++i) {
      EXPECT_FALSE(cps[i] == cps[i + 1] && cps[i] == cps[i + 2] &&
                   cps[i] == cps[i + 3]);
    }

    const Tokens tokens = Tokenize(once);
    std::string joined;
    std::u32string token_chars;
    for (const auto& t : tokens) {
      if (!joined.empty()) joined += ' ';
      joined += t;
      token_chars += DecodeUtf8(t);
    }
    EXPECT_EQ(Tokenize(joined), tokens);
    std::u32string non_space;
    for (char32_t c : DecodeUtf8(once)) {
      if (!IsWhitespace(c)) non_space += c;
    }
    EXPECT_EQ(token_chars, non_space);
  }
}

}  // namespace
}  // namespace toxattack
