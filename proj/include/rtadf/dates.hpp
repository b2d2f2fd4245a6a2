#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <string>

#include "rtadf/error.hpp"

namespace rtadf {

// Calendar date held as a serial day count (days since 1970-01-01, proleptic
// Gregorian). Ordering and arithmetic work on the serial; the civil triple is
// derived on demand.
struct Date {
    std::int64_t serial = 0;

    friend bool operator==(const Date& a, const Date& b) { return a.serial == b.serial; }
    friend bool operator!=(const Date& a, const Date& b) { return a.serial != b.serial; }
    friend bool operator<(const Date& a, const Date& b) { return a.serial < b.serial; }
    friend bool operator<=(const Date& a, const Date& b) { return a.serial <= b.serial; }
    friend bool operator>(const Date& a, const Date& b) { return a.serial > b.serial; }
    friend bool operator>=(const Date& a, const Date& b) { return a.serial >= b.serial; }
};

namespace detail {

// Howard Hinnant's public-domain civil <-> days algorithms.
inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);                  // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;        // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;                 // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);               // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365; // [0, 399]
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);               // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                                    // [0, 11]
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

inline bool is_leap(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline unsigned days_in_month(int y, unsigned m) {
    static const unsigned lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[m - 1];
}

}  // namespace detail

inline Date make_date(int year, unsigned month, unsigned day) {
    if (month < 1 || month > 12 || day < 1 || day > detail::days_in_month(year, month))
        throw input_error("invalid calendar date");
    return Date{detail::days_from_civil(year, month, day)};
}

// Date patterns use letter runs: YYYY (year), MM (month), DD (day); every
// other character must match literally. Default is ISO-8601, "YYYY-MM-DD".
inline constexpr const char* kIsoDateFormat = "YYYY-MM-DD";

inline Date parse_date(const std::string& text, const std::string& pattern = kIsoDateFormat) {
    int year = 0;
    unsigned month = 0, day = 0;
    bool have_y = false, have_m = false, have_d = false;
    std::size_t ti = 0;
    std::size_t pi = 0;
    auto fail = [&]() -> Date {
        throw input_error("cannot parse date '" + text + "' with pattern '" + pattern + "'");
    };
    while (pi < pattern.size()) {
        const char c = pattern[pi];
        if (c == 'Y' || c == 'M' || c == 'D') {
            std::size_t run = 0;
            while (pi + run < pattern.size() && pattern[pi + run] == c) ++run;
            long value = 0;
            std::size_t digits = 0;
            while (ti < text.size() && digits < run &&
                   std::isdigit(static_cast<unsigned char>(text[ti]))) {
                value = value * 10 + (text[ti] - '0');
                ++ti;
                ++digits;
            }
            if (digits == 0) return fail();
            if (c == 'Y') { year = static_cast<int>(value); have_y = true; }
            else if (c == 'M') { month = static_cast<unsigned>(value); have_m = true; }
            else { day = static_cast<unsigned>(value); have_d = true; }
            pi += run;
        } else {
            if (ti >= text.size() || text[ti] != c) return fail();
            ++ti;
            ++pi;
        }
    }
    if (ti != text.size() || !have_y || !have_m || !have_d) return fail();
    if (month < 1 || month > 12 || day < 1 || day > detail::days_in_month(year, month))
        throw input_error("invalid calendar date '" + text + "'");
    return Date{detail::days_from_civil(year, month, day)};
}

inline std::string format_date(const Date& date, const std::string& pattern = kIsoDateFormat) {
    int y;
    unsigned m, d;
    detail::civil_from_days(date.serial, y, m, d);
    std::string out;
    std::size_t pi = 0;
    char buf[16];
    while (pi < pattern.size()) {
        const char c = pattern[pi];
        if (c == 'Y' || c == 'M' || c == 'D') {
            std::size_t run = 0;
            while (pi + run < pattern.size() && pattern[pi + run] == c) ++run;
            long value = (c == 'Y') ? y : (c == 'M') ? static_cast<long>(m) : static_cast<long>(d);
            std::snprintf(buf, sizeof buf, "%0*ld", static_cast<int>(run), value);
            out += buf;
            pi += run;
        } else {
            out += c;
            ++pi;
        }
    }
    return out;
}

}  // namespace rtadf
