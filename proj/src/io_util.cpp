#include "tsalign/io_util.hpp"

#include <charconv>
#include <cstdlib>

namespace tsalign {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

// Counts significant digits in the mantissa part of a to_chars rendering,
// i.e. digits ignoring sign, decimal point, and leading zeros.
int count_significant(std::string_view mantissa) {
  int count = 0;
  bool leading = true;
  for (char c : mantissa) {
    if (c < '0' || c > '9') continue;
    if (leading && c == '0') continue;
    leading = false;
    ++count;
  }
  // All-zero mantissa ("0") counts as one digit.
  return count == 0 ? 1 : count;
}

}  // namespace

std::string format_double_min_sig(double value, int min_significant) {
  std::string s = format_double(value);
  const std::size_t epos = s.find_first_of("eE");
  std::string mantissa = epos == std::string::npos ? s : s.substr(0, epos);
  const std::string exponent = epos == std::string::npos ? "" : s.substr(epos);

  int sig = count_significant(mantissa);
  if (sig >= min_significant) return s;
  if (mantissa.find('.') == std::string::npos) mantissa += '.';
  mantissa.append(static_cast<std::size_t>(min_significant - sig), '0');
  return mantissa + exponent;
}

bool parse_double(std::string_view text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

bool parse_u64(std::string_view text, std::uint64_t& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

bool parse_i64(std::string_view text, std::int64_t& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace tsalign
