#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rtadf/dates.hpp"
#include "rtadf/error.hpp"

namespace rtadf {

enum class Transform { raw, log };

// Ordered (date, value) observations of a price index. Dates are metadata:
// every statistic downstream works on observation indices, dates re-enter
// only when episodes are reported.
struct TimeSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    std::string label;
    Transform transform = Transform::raw;

    int size() const { return static_cast<int>(values.size()); }
};

inline void validate(const TimeSeries& s) {
    if (s.dates.size() != s.values.size())
        throw input_error("series '" + s.label + "': dates and values differ in length");
    if (s.size() < 2)
        throw input_error("series '" + s.label + "': need at least 2 observations");
    for (int i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s.values[i]))
            throw input_error("series '" + s.label + "': non-finite value at " +
                              format_date(s.dates[i]));
        if (i > 0 && s.dates[i].serial <= s.dates[i - 1].serial)
            throw input_error("series '" + s.label + "': dates not strictly increasing at " +
                              format_date(s.dates[i]));
    }
}

namespace detail {

// RFC-4180-ish field splitter: quoted fields, "" escapes, no multiline fields.
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') { cur += '"'; ++i; }
                else quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

inline std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace detail

// Loads a series from a headered CSV. Rows must parse completely: a bad
// date or value is an error, not a silent skip. Rows may arrive in any
// order; the result is sorted ascending by date.
inline TimeSeries load_csv(const std::string& path,
                           const std::string& date_column = "date",
                           const std::string& value_column = "value",
                           const std::string& date_format = kIsoDateFormat) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open '" + path + "'");

    std::string header;
    if (!std::getline(in, header)) throw input_error("'" + path + "': empty file");
    header = detail::strip_cr(header);
    if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF &&
        static_cast<unsigned char>(header[1]) == 0xBB &&
        static_cast<unsigned char>(header[2]) == 0xBF)
        header.erase(0, 3);

    const auto columns = detail::split_csv_line(header);
    int date_idx = -1, value_idx = -1;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == date_column) date_idx = static_cast<int>(i);
        if (columns[i] == value_column) value_idx = static_cast<int>(i);
    }
    if (date_idx < 0) throw input_error("'" + path + "': missing column '" + date_column + "'");
    if (value_idx < 0) throw input_error("'" + path + "': missing column '" + value_column + "'");

    TimeSeries s;
    s.label = path;
    std::string line;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = detail::strip_cr(line);
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (static_cast<int>(fields.size()) <= std::max(date_idx, value_idx))
            throw input_error("'" + path + "' line " + std::to_string(line_no) +
                              ": too few fields");
        const std::string& raw_value = fields[value_idx];
        if (raw_value.empty())
            throw input_error("'" + path + "' line " + std::to_string(line_no) +
                              ": missing value");
        std::size_t consumed = 0;
        double value = 0;
        try {
            value = std::stod(raw_value, &consumed);
        } catch (const std::exception&) {
            throw input_error("'" + path + "' line " + std::to_string(line_no) +
                              ": cannot parse value '" + raw_value + "'");
        }
        if (consumed != raw_value.size() || !std::isfinite(value))
            throw input_error("'" + path + "' line " + std::to_string(line_no) +
                              ": cannot parse value '" + raw_value + "'");
        Date date;
        try {
            date = parse_date(fields[date_idx], date_format);
        } catch (const input_error& e) {
            throw input_error("'" + path + "' line " + std::to_string(line_no) + ": " + e.what());
        }
        s.dates.push_back(date);
        s.values.push_back(value);
    }
    if (s.values.empty()) throw input_error("'" + path + "': no data rows");

    std::vector<int> order(s.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return s.dates[a].serial < s.dates[b].serial;
    });
    TimeSeries sorted;
    sorted.label = s.label;
    sorted.dates.reserve(s.dates.size());
    sorted.values.reserve(s.values.size());
    for (int idx : order) {
        sorted.dates.push_back(s.dates[idx]);
        sorted.values.push_back(s.values[idx]);
    }
    for (std::size_t i = 1; i < sorted.dates.size(); ++i)
        if (sorted.dates[i].serial == sorted.dates[i - 1].serial)
            throw input_error("'" + path + "': duplicate date " + format_date(sorted.dates[i]));

    validate(sorted);
    return sorted;
}

// Values serialize at 17 significant digits, which round-trips doubles exactly.
inline void write_csv(const TimeSeries& s, std::ostream& out,
                      const std::string& date_column = "date",
                      const std::string& value_column = "value",
                      const std::string& date_format = kIsoDateFormat) {
    out << date_column << ',' << value_column << '\n';
    char buf[64];
    for (int i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", s.values[i]);
        out << format_date(s.dates[i], date_format) << ',' << buf << '\n';
    }
}

inline TimeSeries to_log(const TimeSeries& s) {
    if (s.transform == Transform::log)
        throw input_error("series '" + s.label + "' is already log-transformed");
    TimeSeries out = s;
    for (int i = 0; i < s.size(); ++i) {
        if (!(s.values[i] > 0.0))
            throw input_error("series '" + s.label + "': non-positive value at " +
                              format_date(s.dates[i]) + ", cannot take logs");
        out.values[i] = std::log(s.values[i]);
    }
    out.transform = Transform::log;
    return out;
}

// Contiguous sub-series [start, end); label and transform carry over.
inline TimeSeries slice(const TimeSeries& s, int start, int end) {
    if (start < 0 || end > s.size() || start >= end)
        throw input_error("series '" + s.label + "': bad slice [" + std::to_string(start) +
                          ", " + std::to_string(end) + ") of length " +
                          std::to_string(s.size()));
    TimeSeries out;
    out.label = s.label;
    out.transform = s.transform;
    out.dates.assign(s.dates.begin() + start, s.dates.begin() + end);
    out.values.assign(s.values.begin() + start, s.values.begin() + end);
    return out;
}

}  // namespace rtadf
