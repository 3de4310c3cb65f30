#ifndef TOXATTACK_CSV_H_
#define TOXATTACK_CSV_H_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace toxattack {

struct CsvRecord {
  std::vector<std::string> fields;
  // 1-based line on which the record starts.
  std::size_t line = 0;
};

// RFC-4180 reader. Quoted fields may span lines; blank lines are skipped.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Returns false at end of input. Throws DataError on an unterminated
  // quote or stray characters after a closing quote.
  bool Next(CsvRecord& record);

 private:
  std::istream& in_;
  std::size_t line_ = 1;
};

// Quotes a field when it contains a comma, quote, CR or LF.
std::string CsvEscape(std::string_view field);

}  // namespace toxattack

#endif  // TOXATTACK_CSV_H_
