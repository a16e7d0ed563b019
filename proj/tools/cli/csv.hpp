#pragma once

#include <istream>
#include <string>

#include "poisest/errors.hpp"
#include "poisest/synth.hpp"

namespace poisest::cli {

/// Input schema for `fit`:
///   - UTF-8 text, one record per line, LF or CRLF line endings
///   - each record is two non-negative decimal integers "x,y" (x auxiliary,
///     y study), no spaces, no quoting
///   - the first non-blank line may be the header "x,y"
///   - blank (empty or whitespace-only) lines are ignored
/// Any other line is rejected with its 1-based line number.
class CsvError : public ValidationError {
 public:
  CsvError(std::size_t line, const std::string& what)
      : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

Sample read_count_csv(std::istream& in);

}  // namespace poisest::cli
