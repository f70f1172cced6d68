#include "causalpost/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>

namespace causalpost::csv {

std::string format(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("csv::format: conversion failed");
  return std::string(buf, end);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field, std::size_t line) {
  const std::string_view t = trim(field);
  double value = 0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc() || ptr != last) {
    throw ParseError("line " + std::to_string(line) + ": cannot parse '" + std::string(t) + "' as a number", line);
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

bool Reader::next(std::string& line) {
  while (std::getline(in_, line)) {
    ++line_number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!trim(line).empty()) return true;
  }
  return false;
}

void expect_header(Reader& reader, std::string_view expected) {
  std::string line;
  if (!reader.next(line)) throw ParseError("missing header row, expected '" + std::string(expected) + "'", 1);
  const auto got = split(line);
  const auto want = split(expected);
  bool ok = got.size() == want.size();
  for (std::size_t i = 0; ok && i < got.size(); ++i) ok = trim(got[i]) == want[i];
  if (!ok) {
    throw ParseError("line " + std::to_string(reader.line_number()) + ": expected header '" +
                         std::string(expected) + "', got '" + line + "'",
                     reader.line_number());
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace causalpost::csv
