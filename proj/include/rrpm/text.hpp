#ifndef RRPM_TEXT_HPP
#define RRPM_TEXT_HPP

// Small parsing and formatting helpers shared by the config and CSV readers.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rrpm {

std::string trim(std::string_view s);

// Strict numeric parsing: the whole field must be consumed. `what` names the
// field in the ParseError message.
int parse_int(std::string_view s, std::string_view what);
std::uint64_t parse_u64(std::string_view s, std::string_view what);
double parse_double(std::string_view s, std::string_view what);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Comma-separated rows, fields trimmed, blank lines skipped. No quoting.
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace rrpm

#endif  // RRPM_TEXT_HPP
