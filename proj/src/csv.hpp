#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace upm::csv {

// RFC 4180 style reader: comma separated, double-quote escaping, quoted
// fields may span lines. A trailing '\r' before a newline is ignored.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Reads the next record; false at end of input. Throws std::runtime_error
  // on an unterminated quote.
  bool next(std::vector<std::string>& fields);

  // Physical line on which the last returned record started (1-based).
  std::size_t record_line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
};

std::string quote(std::string_view field);

}  // namespace upm::csv
