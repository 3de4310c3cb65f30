#ifndef TOXATTACK_CONFUSION_MAP_H_
#define TOXATTACK_CONFUSION_MAP_H_

#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <vector>

namespace toxattack {

// Character -> visually similar replacement characters.
class ConfusionMap {
 public:
  ConfusionMap() = default;

  // Throws DataError if `source` maps to itself, `replacements` is empty or
  // repeats a character, or `source` already has an entry.
  void Add(char32_t source, std::vector<char32_t> replacements);

  // Empty when `c` has no entry.
  std::span<const char32_t> Lookup(char32_t c) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<char32_t, std::vector<char32_t>>& entries() const {
    return entries_;
  }

 private:
  std::map<char32_t, std::vector<char32_t>> entries_;
};

// Cyrillic, Greek and accented look-alikes for all 26 lower-case Latin
// letters. Identical to core/data/default_confusion_map.tsv.
const ConfusionMap& DefaultConfusionMap();

// `source_char<TAB>r1,r2,...` per line; `#` comments and blank lines allowed.
ConfusionMap LoadConfusionMap(std::istream& in);
void SaveConfusionMap(const ConfusionMap& map, std::ostream& out);

}  // namespace toxattack

#endif  // TOXATTACK_CONFUSION_MAP_H_
