#include "toxattack/confusion_map.h"

#include <algorithm>
#include <string>
#include <string_view>

#include "toxattack/error.h"
#include "toxattack/text.h"

namespace toxattack {
namespace {

struct DefaultRow {
  char32_t source;
  std::u32string_view replacements;
};

constexpr DefaultRow kDefaultRows[] = {
    {U'a', U"аáàâ"}, {U'b', U"ьḃƅ"},  {U'c', U"сçć"},  {U'd', U"ԁďɗ"},
    {U'e', U"еéèê"}, {U'f', U"ƒḟ"},   {U'g', U"ɡğġ"},  {U'h', U"һĥ"},
    {U'i', U"іíìï"}, {U'j', U"јĵ"},   {U'k', U"κķ"},   {U'l', U"ӏĺļ"},
    {U'm', U"ṃṁ"},   {U'n', U"ոńñ"},  {U'o', U"оοöó"}, {U'p', U"рρ"},
    {U'q', U"ԛɋ"},   {U'r', U"ŕř"},   {U's', U"ѕśš"},  {U't', U"ţť"},
    {U'u', U"υüú"},  {U'v', U"νѵ"},   {U'w', U"ԝŵ"},   {U'x', U"хẋ"},
    {U'y', U"уýÿ"},  {U'z', U"żźž"},
};

}  // namespace

void ConfusionMap::Add(char32_t source, std::vector<char32_t> replacements) {
  const std::string shown = EncodeUtf8(source);
  if (replacements.empty()) {
    throw DataError("no replacements for '" + shown + "'");
  }
  for (std::size_t i = 0; i < replacements.size(); ++i) {
    if (replacements[i] == source) {
      throw DataError("'" + shown + "' maps to itself");
    }
    if (std::find(replacements.begin(), replacements.begin() + i,
                  replacements[i]) != replacements.begin() + i) {
      throw DataError("repeated replacement for '" + shown + "'");
    }
  }
  if (!entries_.emplace(source, std::move(replacements)).second) {
    throw DataError("duplicate entry for '" + shown + "'");
  }
}

std::span<const char32_t> ConfusionMap::Lookup(char32_t c) const {
  auto it = entries_.find(c);
  if (it == entries_.end()) return {};
  return it->second;
}

const ConfusionMap& DefaultConfusionMap() {
  static const ConfusionMap map = [] {
    ConfusionMap m;
    for (const auto& row : kDefaultRows) {
      m.Add(row.source, std::vector<char32_t>(row.replacements.begin(),
                                              row.replacements.end()));
    }
    return m;
  }();
  return map;
}

ConfusionMap LoadConfusionMap(std::istream& in) {
  ConfusionMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    try {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw DataError("expected source_char<TAB>replacements");
      }
      const std::u32string source = DecodeUtf8(line.substr(0, tab));
      if (source.size() != 1) {
        throw DataError("source must be a single character");
      }
      std::vector<char32_t> replacements;
      std::string_view rest = std::string_view(line).substr(tab + 1);
      while (true) {
        const auto comma = rest.find(',');
        const std::u32string item = DecodeUtf8(rest.substr(0, comma));
        if (item.size() != 1) {
          throw DataError("each replacement must be a single character");
        }
        replacements.push_back(item[0]);
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
      }
      map.Add(source[0], std::move(replacements));
    } catch (const DataError& e) {
      throw DataError(e.what(), line_no);
    }
  }
  return map;
}

void SaveConfusionMap(const ConfusionMap& map, std::ostream& out) {
  for (const auto& [source, replacements] : map.entries()) {
    out << EncodeUtf8(source) << '\t';
    for (std::size_t i = 0; i < replacements.size(); ++i) {
      if (i > 0) out << ',';
      out << EncodeUtf8(replacements[i]);
    }
    out << '\n';
  }
}

}  // namespace toxattack
