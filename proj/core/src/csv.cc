#include "toxattack/csv.h"

#include "toxattack/error.h"

namespace toxattack {

bool CsvReader::Next(CsvRecord& record) {
  record.fields.clear();
  record.line = line_;

  std::string field;
  bool in_quotes = false;
  bool after_quote = false;
  bool any = false;

  int ch;
  while ((ch = in_.get()) != std::char_traits<char>::eof()) {
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in_.peek() == '"') {
          in_.get();
          field.push_back('"');
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line_;
        field.push_back(c);
      }
      continue;
    }
    if (c == '\r' && in_.peek() == '\n') continue;
    if (c == '\n') {
      ++line_;
      if (!any && field.empty()) {
        // Blank line.
        record.line = line_;
        continue;
      }
      record.fields.push_back(std::move(field));
      return true;
    }
    any = true;
    if (c == ',') {
      record.fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (c == '"' && field.empty() && !after_quote) {
      in_quotes = true;
    } else if (after_quote) {
      throw DataError("unexpected character after closing quote", line_);
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field", record.line);
  if (!any && field.empty()) return false;
  record.fields.push_back(std::move(field));
  return true;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace toxattack
