#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace causalpost {

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0) : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input holding an out-of-domain value.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, std::size_t line = 0) : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace csv {

/// Shortest decimal text that round-trips to the same double.
std::string format(double value);

/// Whole-field parse; throws ParseError mentioning `line`.
double parse_double(std::string_view field, std::size_t line);

std::string_view trim(std::string_view s);

std::vector<std::string_view> split(std::string_view line, char sep = ',');

/// Line-oriented reader that strips trailing '\r' and tracks line numbers.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  bool next(std::string& line);
  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  std::size_t line_number_ = 0;
};

/// Consumes the header row and checks it equals `expected` (comma-joined).
void expect_header(Reader& reader, std::string_view expected);

std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace csv
}  // namespace causalpost
