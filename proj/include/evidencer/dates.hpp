#pragma once

#include <compare>
#include <cstdio>
#include <optional>
#include <string>

#include "evidencer/errors.hpp"

namespace evidencer {

// PubMed and Colil dates come in three precisions; we keep whichever we got
// instead of inventing months or days.
enum class DatePrecision { Year, YearMonth, Day };

struct CalendarDate {
    int year = 0;
    int month = 0;  // 1..12 when precision >= YearMonth
    int day = 0;    // 1..31 when precision == Day
    DatePrecision precision = DatePrecision::Year;

    bool has_month() const { return precision != DatePrecision::Year; }
    bool has_day() const { return precision == DatePrecision::Day; }

    int months_since_epoch() const { return year * 12 + (has_month() ? month - 1 : 0); }

    // Total order used for sorting citances; missing components sort first.
    friend auto operator<=>(const CalendarDate& a, const CalendarDate& b) {
        if (auto c = a.year <=> b.year; c != 0) return c;
        if (auto c = (a.has_month() ? a.month : 0) <=> (b.has_month() ? b.month : 0); c != 0)
            return c;
        return (a.has_day() ? a.day : 0) <=> (b.has_day() ? b.day : 0);
    }
    friend bool operator==(const CalendarDate& a, const CalendarDate& b) {
        return (a <=> b) == 0;
    }
};

// ISO-8601 truncated to the known precision: "2010", "2010-03", "2010-03-15".
inline std::string format_date(const CalendarDate& d) {
    char buf[16];
    switch (d.precision) {
        case DatePrecision::Year:
            std::snprintf(buf, sizeof(buf), "%04d", d.year);
            break;
        case DatePrecision::YearMonth:
            std::snprintf(buf, sizeof(buf), "%04d-%02d", d.year, d.month);
            break;
        case DatePrecision::Day:
            std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
            break;
    }
    return buf;
}

inline std::optional<CalendarDate> try_parse_date(const std::string& s) {
    auto digits = [&](size_t pos, size_t n, int& out) {
        if (pos + n > s.size()) return false;
        int v = 0;
        for (size_t i = pos; i < pos + n; ++i) {
            if (s[i] < '0' || s[i] > '9') return false;
            v = v * 10 + (s[i] - '0');
        }
        out = v;
        return true;
    };
    CalendarDate d;
    if (!digits(0, 4, d.year)) return std::nullopt;
    if (s.size() == 4) {
        d.precision = DatePrecision::Year;
        return d;
    }
    if (s.size() < 7 || s[4] != '-' || !digits(5, 2, d.month)) return std::nullopt;
    if (d.month < 1 || d.month > 12) return std::nullopt;
    if (s.size() == 7) {
        d.precision = DatePrecision::YearMonth;
        return d;
    }
    if (s.size() != 10 || s[7] != '-' || !digits(8, 2, d.day)) return std::nullopt;
    if (d.day < 1 || d.day > 31) return std::nullopt;
    d.precision = DatePrecision::Day;
    return d;
}

inline CalendarDate parse_date(const std::string& s) {
    auto d = try_parse_date(s);
    if (!d) throw Error(ErrorKind::SchemaError, "invalid date: '" + s + "'");
    return *d;
}

}  // namespace evidencer
