#include "mtsa/core.hpp"

#include <algorithm>
#include <cmath>

namespace mtsa {

bool ci_equal(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool CiLess::operator()(std::string_view a, std::string_view b) const {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(), [](unsigned char x, unsigned char y) {
            return std::tolower(x) < std::tolower(y);
        });
}

TimeIndex CalendarTable::tMin() const {
    if (rows_.empty()) throw OutOfRangeError("calendar is empty");
    return rows_.begin()->first;
}

TimeIndex CalendarTable::tMax() const {
    if (rows_.empty()) throw OutOfRangeError("calendar is empty");
    return rows_.rbegin()->first;
}

const CalendarRow& CalendarTable::row(TimeIndex t) const {
    auto it = rows_.find(t);
    if (it == rows_.end())
        throw OutOfRangeError("time " + std::to_string(t) + " outside calendar range");
    return it->second;
}

PeriodIndex period_of(const CalendarTable& cal, TimeIndex t) {
    return cal.row(t).payPeriod;
}

ValidationReport validate_calendar(const CalendarTable& cal) {
    ValidationReport report;
    if (cal.empty()) return report;

    const auto& rows = cal.rows();
    auto prev = rows.begin();
    for (auto it = std::next(rows.begin()); it != rows.end(); ++it, ++prev) {
        if (it->first != prev->first + 1)
            report.issues.push_back(
                {it->first, "gap in time range: " + std::to_string(prev->first) +
                                " is followed by " + std::to_string(it->first)});
        if (it->second.payPeriod < prev->second.payPeriod)
            report.issues.push_back(
                {it->first, "payPeriod decreases from " +
                                std::to_string(prev->second.payPeriod) + " to " +
                                std::to_string(it->second.payPeriod)});
    }
    for (const auto& [t, row] : rows) {
        if (row.month < 1 || row.month > 12)
            report.issues.push_back({t, "month " + std::to_string(row.month) + " outside 1..12"});
        if (row.day < 1 || row.day > 31)
            report.issues.push_back({t, "day " + std::to_string(row.day) + " outside 1..31"});
        if (row.hour < 0 || row.hour > 23)
            report.issues.push_back({t, "hour " + std::to_string(row.hour) + " outside 0..23"});
        if (row.weekDay < 0 || row.weekDay > 6)
            report.issues.push_back(
                {t, "weekDay " + std::to_string(row.weekDay) + " outside 0..6"});
    }
    return report;
}

void TimeSeries::set(TimeIndex t, double value) {
    if (!std::isfinite(value))
        throw Error("series " + name_ + ": nonfinite value at time " + std::to_string(t));
    values_[t] = value;
}

double TimeSeries::at(TimeIndex t) const {
    auto it = values_.find(t);
    if (it == values_.end())
        throw OutOfRangeError("series " + name_ + ": no value at time " + std::to_string(t));
    return it->second;
}

Horizon horizon_of(const TimeSeries& series) {
    Horizon h;
    for (const auto& [t, value] : series.values()) {
        (void)value;
        (t <= 0 ? h.past : h.future).push_back(t);
    }
    return h;
}

void DecisionParameterTable::set(std::int32_t key, double value) {
    if (!std::isfinite(value))
        throw Error("parameter " + name_ + ": nonfinite value at key " + std::to_string(key));
    values_[key] = value;
}

double DecisionParameterTable::at(std::int32_t key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw OutOfRangeError("parameter " + name_ + ": no value at key " + std::to_string(key));
    return it->second;
}

void TimeEventSeries::set(TimeIndex t, int indicator) {
    if (indicator != 0 && indicator != 1)
        throw Error("event series " + name_ + ": indicator must be 0 or 1");
    values_[t] = indicator;
}

int TimeEventSeries::at(TimeIndex t) const {
    auto it = values_.find(t);
    if (it == values_.end())
        throw OutOfRangeError("event series " + name_ + ": no value at time " + std::to_string(t));
    return it->second;
}

const TimeSeries* DataStore::find_series(std::string_view name) const {
    auto it = series.find(name);
    return it == series.end() ? nullptr : &it->second;
}

}  // namespace mtsa
