#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace mresp {

// Calendar date. Stored as plain fields; arithmetic goes through the
// proleptic-Gregorian day count so day differences are exact.
struct Date {
    std::int16_t year = 1970;
    std::uint8_t month = 1;  // 1..12
    std::uint8_t day = 1;    // 1..31

    auto operator<=>(const Date&) const = default;

    // Days since 1970-01-01 (negative before the epoch).
    std::int64_t day_number() const;

    // "YYYY-MM-DD"
    std::string iso() const;

    bool valid() const;

    static Date from_day_number(std::int64_t days);

    // Parses "YYYY-MM-DD"; nullopt on malformed or out-of-range input.
    static std::optional<Date> parse(std::string_view text);
};

// Seconds-of-day helpers. "HH:MM:SS" <-> seconds since midnight.
std::optional<int> parse_time_of_day(std::string_view text);
std::string format_time_of_day(int seconds);

}  // namespace mresp
