#include "mresp/dates.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace mresp {

namespace {

constexpr std::array<int, 12> kDaysInMonth = {31, 28, 31, 30, 31, 30,
                                              31, 31, 30, 31, 30, 31};

bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(int y, int m) {
    if (m == 2 && is_leap(y)) return 29;
    return kDaysInMonth[static_cast<std::size_t>(m - 1)];
}

// Howard Hinnant's civil-days algorithm; exact over the full int16 year range.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::optional<int> parse_int_field(std::string_view text, std::size_t pos,
                                   std::size_t len) {
    if (pos + len > text.size()) return std::nullopt;
    int value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc() || ptr != first + len) return std::nullopt;
    return value;
}

}  // namespace

std::int64_t Date::day_number() const {
    return days_from_civil(year, month, day);
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", static_cast<int>(year),
                  static_cast<int>(month), static_cast<int>(day));
    return buf;
}

bool Date::valid() const {
    if (month < 1 || month > 12) return false;
    if (day < 1 || day > days_in_month(year, month)) return false;
    return true;
}

Date Date::from_day_number(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<std::int16_t>(y + (m <= 2)),
                static_cast<std::uint8_t>(m), static_cast<std::uint8_t>(d)};
}

std::optional<Date> Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        return std::nullopt;
    auto y = parse_int_field(text, 0, 4);
    auto m = parse_int_field(text, 5, 2);
    auto d = parse_int_field(text, 8, 2);
    if (!y || !m || !d) return std::nullopt;
    Date out{static_cast<std::int16_t>(*y), static_cast<std::uint8_t>(*m),
             static_cast<std::uint8_t>(*d)};
    if (!out.valid()) return std::nullopt;
    return out;
}

std::optional<int> parse_time_of_day(std::string_view text) {
    if (text.size() != 8 || text[2] != ':' || text[5] != ':')
        return std::nullopt;
    auto h = parse_int_field(text, 0, 2);
    auto m = parse_int_field(text, 3, 2);
    auto s = parse_int_field(text, 6, 2);
    if (!h || !m || !s) return std::nullopt;
    if (*h > 23 || *m > 59 || *s > 59) return std::nullopt;
    return *h * 3600 + *m * 60 + *s;
}

std::string format_time_of_day(int seconds) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", seconds / 3600,
                  (seconds / 60) % 60, seconds % 60);
    return buf;
}

}  // namespace mresp
