#ifndef TOXATTACK_KEY_VALUE_H_
#define TOXATTACK_KEY_VALUE_H_

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <string_view>

namespace toxattack {

// Flat `key = value` configuration text. `#` starts a comment line; blank
// lines are ignored; keys and values are whitespace-trimmed.
class KeyValues {
 public:
  static KeyValues Parse(std::istream& in);

  bool Has(std::string_view key) const;
  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }
  void Set(std::string key, std::string value);

  // Typed accessors; each throws DataError naming the key on a bad value.
  std::string GetString(std::string_view key, std::string fallback) const;
  double GetDouble(std::string_view key, double fallback) const;
  std::int64_t GetInt(std::string_view key, std::int64_t fallback) const;
  std::uint64_t GetUint64(std::string_view key, std::uint64_t fallback) const;
  bool GetBool(std::string_view key, bool fallback) const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace toxattack

#endif  // TOXATTACK_KEY_VALUE_H_
