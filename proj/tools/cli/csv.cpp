#include "cli/csv.hpp"

#include <charconv>
#include <string_view>
#include <vector>

namespace poisest::cli {

namespace {

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

std::int64_t parse_count(std::string_view field, std::size_t line, const char* name) {
  if (field.empty()) throw CsvError(line, std::string("empty ") + name + " field");
  if (field.front() == '-') throw CsvError(line, std::string("negative ") + name + " count");
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.front() == '+') {
    throw CsvError(line, std::string(name) + " is not a non-negative integer: '" +
                             std::string(field) + "'");
  }
  return value;
}

}  // namespace

Sample read_count_csv(std::istream& in) {
  std::vector<CountPair> pairs;
  std::string raw;
  std::size_t line = 0;
  bool seen_content = false;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (is_blank(text)) continue;
    if (!seen_content) {
      seen_content = true;
      if (text == "x,y") continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) throw CsvError(line, "expected two comma-separated columns");
    const std::string_view xs = text.substr(0, comma);
    const std::string_view ys = text.substr(comma + 1);
    if (ys.find(',') != std::string_view::npos) throw CsvError(line, "more than two columns");
    pairs.push_back({parse_count(xs, line, "x"), parse_count(ys, line, "y")});
  }
  if (pairs.empty()) throw ValidationError("input contains no data rows");
  return Sample(std::move(pairs));
}

}  // namespace poisest::cli
