#ifndef TOXATTACK_ERROR_H_
#define TOXATTACK_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace toxattack {

// Raised for any malformed input or violated data invariant. When the error
// originates in a line-oriented file, `line()` is the 1-based line number,
// otherwise 0.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what
                                     : "line " + std::to_string(line) + ": " +
                                           what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace toxattack

#endif  // TOXATTACK_ERROR_H_
