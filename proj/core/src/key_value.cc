#include "toxattack/key_value.h"

#include <charconv>
#include <string>

#include "toxattack/error.h"
#include "toxattack/text.h"

namespace toxattack {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseInteger(std::string_view key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw DataError("config key '" + std::string(key) +
                    "': not an integer: '" + text + "'");
  }
  return value;
}

}  // namespace

KeyValues KeyValues::Parse(std::istream& in) {
  KeyValues kv;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = Trim(raw);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("expected 'key = value'", line);
    }
    const std::string key(Trim(text.substr(0, eq)));
    if (key.empty()) throw DataError("empty key", line);
    if (kv.entries_.count(key) != 0) {
      throw DataError("duplicate key '" + key + "'", line);
    }
    kv.entries_.emplace(key, std::string(Trim(text.substr(eq + 1))));
  }
  return kv;
}

bool KeyValues::Has(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

void KeyValues::Set(std::string key, std::string value) {
  entries_[std::move(key)] = std::move(value);
}

std::string KeyValues::GetString(std::string_view key,
                                 std::string fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValues::GetDouble(std::string_view key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return ParseDouble(it->second, "config key '" + std::string(key) + "'");
}

std::int64_t KeyValues::GetInt(std::string_view key,
                               std::int64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return ParseInteger<std::int64_t>(key, it->second);
}

std::uint64_t KeyValues::GetUint64(std::string_view key,
                                   std::uint64_t fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  return ParseInteger<std::uint64_t>(key, it->second);
}

bool KeyValues::GetBool(std::string_view key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DataError("config key '" + std::string(key) + "': not a boolean: '" +
                  v + "'");
}

}  // namespace toxattack
