#include "rrpm/text.hpp"

#include <charconv>
#include <istream>

#include "rrpm/error.hpp"

namespace rrpm {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

namespace {

template <typename T>
T parse_number(std::string_view raw, std::string_view what) {
  const std::string s = trim(raw);
  T value{};
  const char* begin = s.data();
  if (!s.empty() && s[0] == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::ParseError,
                "bad value '" + std::string(raw) + "' for " + std::string(what));
  return value;
}

}  // namespace

int parse_int(std::string_view s, std::string_view what) { return parse_number<int>(s, what); }

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  return parse_number<std::uint64_t>(s, what);
}

double parse_double(std::string_view s, std::string_view what) {
  return parse_number<double>(s, what);
}

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace rrpm
