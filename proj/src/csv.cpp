#include "mtsa/csv.hpp"

#include <charconv>
#include <sstream>
#include <system_error>

namespace mtsa {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

long parse_int(std::string_view field, int lineNo) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw CsvError(CsvError::Kind::Parse, lineNo,
                       "expected integer, got '" + std::string(field) + "'");
    return value;
}

double parse_real(std::string_view field, int lineNo) {
    double value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw CsvError(CsvError::Kind::Parse, lineNo,
                       "expected number, got '" + std::string(field) + "'");
    return value;
}

// Iterates nonempty lines, calling fn(lineNo, fields). Verifies the header.
template <typename Fn>
void for_each_row(std::string_view text, const std::vector<std::string>& header, Fn&& fn) {
    int lineNo = 0;
    std::size_t pos = 0;
    bool sawHeader = false;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = trim(text.substr(pos, eol - pos));
        pos = eol + 1;
        ++lineNo;
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (!sawHeader) {
            if (fields.size() != header.size())
                throw CsvError(CsvError::Kind::Parse, lineNo,
                               "expected " + std::to_string(header.size()) + " header columns");
            for (std::size_t i = 0; i < header.size(); ++i)
                if (!ci_equal(fields[i], header[i]))
                    throw CsvError(CsvError::Kind::Parse, lineNo,
                                   "expected header column '" + header[i] + "', got '" +
                                       std::string(fields[i]) + "'");
            sawHeader = true;
            continue;
        }
        if (fields.size() != header.size())
            throw CsvError(CsvError::Kind::Parse, lineNo,
                           "expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
        fn(lineNo, fields);
    }
    if (!sawHeader)
        throw CsvError(CsvError::Kind::Parse, 1, "missing header row");
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

TimeSeries load_series(std::string_view csvText, std::string name) {
    TimeSeries series(std::move(name));
    for_each_row(csvText, {"time", "value"}, [&](int lineNo, const auto& fields) {
        auto t = static_cast<TimeIndex>(parse_int(fields[0], lineNo));
        double v = parse_real(fields[1], lineNo);
        if (series.contains(t))
            throw CsvError(CsvError::Kind::DuplicateKey, lineNo,
                           "duplicate time " + std::to_string(t));
        series.set(t, v);
    });
    return series;
}

std::string serialize_series(const TimeSeries& series) {
    std::ostringstream out;
    out << "time,value\n";
    for (const auto& [t, v] : series.values()) out << t << ',' << format_number(v) << '\n';
    return out.str();
}

CalendarTable load_calendar(std::string_view csvText) {
    CalendarTable cal;
    for_each_row(
        csvText, {"time", "payPeriod", "year", "month", "day", "hour", "weekDay"},
        [&](int lineNo, const auto& fields) {
            auto t = static_cast<TimeIndex>(parse_int(fields[0], lineNo));
            if (cal.contains(t))
                throw CsvError(CsvError::Kind::DuplicateKey, lineNo,
                               "duplicate time " + std::to_string(t));
            CalendarRow row;
            row.payPeriod = static_cast<PeriodIndex>(parse_int(fields[1], lineNo));
            row.year = static_cast<int>(parse_int(fields[2], lineNo));
            row.month = static_cast<int>(parse_int(fields[3], lineNo));
            row.day = static_cast<int>(parse_int(fields[4], lineNo));
            row.hour = static_cast<int>(parse_int(fields[5], lineNo));
            row.weekDay = static_cast<int>(parse_int(fields[6], lineNo));
            cal.set(t, row);
        });
    return cal;
}

std::string serialize_calendar(const CalendarTable& cal) {
    std::ostringstream out;
    out << "time,payPeriod,year,month,day,hour,weekDay\n";
    for (const auto& [t, row] : cal.rows())
        out << t << ',' << row.payPeriod << ',' << row.year << ',' << row.month << ','
            << row.day << ',' << row.hour << ',' << row.weekDay << '\n';
    return out.str();
}

DecisionParameterTable load_parameter_table(std::string_view csvText, std::string name,
                                            ParamKeying keying) {
    DecisionParameterTable table(std::move(name), keying);
    if (keying == ParamKeying::PerInterval) {
        for_each_row(csvText, {"time", "value"}, [&](int lineNo, const auto& fields) {
            auto t = static_cast<std::int32_t>(parse_int(fields[0], lineNo));
            double v = parse_real(fields[1], lineNo);
            if (table.contains(t))
                throw CsvError(CsvError::Kind::DuplicateKey, lineNo,
                               "duplicate time " + std::to_string(t));
            table.set(t, v);
        });
        return table;
    }
    // Per-period values arrive broadcast over intervals; rows of the same
    // period must agree.
    for_each_row(csvText, {"time", "period", "value"}, [&](int lineNo, const auto& fields) {
        parse_int(fields[0], lineNo);  // interval key, not stored
        auto p = static_cast<std::int32_t>(parse_int(fields[1], lineNo));
        double v = parse_real(fields[2], lineNo);
        if (table.contains(p) && table.at(p) != v)
            throw CsvError(CsvError::Kind::Parse, lineNo,
                           "conflicting values for period " + std::to_string(p));
        table.set(p, v);
    });
    return table;
}

}  // namespace mtsa
