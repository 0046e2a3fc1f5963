#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tsalign {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Like format_double but padded with trailing zeros until the mantissa
/// shows at least `min_significant` digits. Still round-trip exact.
std::string format_double_min_sig(double value, int min_significant);

/// Full-string strict parses; return false on any trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_u64(std::string_view text, std::uint64_t& out);
bool parse_i64(std::string_view text, std::int64_t& out);

/// Splits one CSV line on commas. No quoting; fields are raw slices.
std::vector<std::string_view> split_fields(std::string_view line);

/// Strips a trailing '\r' (files written on Windows).
std::string_view strip_cr(std::string_view line);

}  // namespace tsalign
