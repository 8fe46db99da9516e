#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace placerank::csv {

/// Splits one CSV record. Handles double-quoted fields with "" escapes;
/// does not handle embedded newlines (records are single lines here).
std::vector<std::string> split_record(const std::string& line);

/// Joins fields into one record, quoting where needed.
std::string join_record(std::span<const std::string> fields);

/// Line-oriented reader that tracks 1-based line numbers.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::optional<std::vector<std::string>> next();
  std::size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

void write_record(std::ostream& out, std::span<const std::string> fields);

}  // namespace placerank::csv
