#ifndef TOXATTACK_TEXT_H_
#define TOXATTACK_TEXT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

// UTF-8 <-> code point helpers. All character-level logic in the toolkit
// (scrambling, homoglyphs, edit distance) operates on code points.

namespace toxattack {

bool IsValidUtf8(std::string_view bytes);

// Throws DataError on malformed UTF-8.
std::u32string DecodeUtf8(std::string_view bytes);

std::string EncodeUtf8(std::u32string_view code_points);
std::string EncodeUtf8(char32_t code_point);

std::size_t CodePointLength(std::string_view bytes);

bool IsWhitespace(char32_t c);

// Simple (1:1) Unicode lower-case mapping.
char32_t ToLower(char32_t c);

// Letters, combining marks and decimal digits.
bool IsWordCharacter(char32_t c);

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

// Strict full-string parse; throws DataError naming `what` otherwise.
double ParseDouble(std::string_view text, std::string_view what);

// 64-bit FNV-1a.
inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

constexpr std::uint64_t Fnv1a(std::string_view bytes,
                              std::uint64_t hash = kFnvOffsetBasis) {
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= kFnvPrime;
  }
  return hash;
}

}  // namespace toxattack

#endif  // TOXATTACK_TEXT_H_
