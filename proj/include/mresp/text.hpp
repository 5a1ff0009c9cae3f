#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mresp {

// Shortest decimal form that round-trips the exact double (to_chars).
// Printed prices must reparse bit-identically or equality-based logic
// (tick-rule price comparisons) breaks after a save/load cycle.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int64(std::string_view text);

// Splits one delimited line into fields (no quoting; feeds are plain).
void split_fields(std::string_view line, char delimiter,
                  std::vector<std::string_view>& out);

}  // namespace mresp
