#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mtsa {

// Time intervals and pay periods are integer-indexed. Zero and negative
// indices are historical; strictly positive indices are projected.
using TimeIndex = std::int32_t;
using PeriodIndex = std::int32_t;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OutOfRangeError : public Error {
public:
    using Error::Error;
};

// Identifiers throughout the system compare case-insensitively.
bool ci_equal(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);

struct CiLess {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const;
};

struct CalendarRow {
    PeriodIndex payPeriod = 0;
    int year = 0;
    int month = 1;    // 1..12
    int day = 1;      // 1..31
    int hour = 0;     // 0..23
    int weekDay = 0;  // 0 = Sunday .. 6 = Saturday
    bool operator==(const CalendarRow&) const = default;
};

// Per-interval attribute table keyed by time. A well-formed table covers a
// contiguous [tMin, tMax] range with a monotone nondecreasing payPeriod map;
// validate_calendar reports violations without throwing.
class CalendarTable {
public:
    void set(TimeIndex t, CalendarRow row) { rows_[t] = row; }

    bool empty() const { return rows_.empty(); }
    std::size_t size() const { return rows_.size(); }
    TimeIndex tMin() const;
    TimeIndex tMax() const;
    bool contains(TimeIndex t) const { return rows_.count(t) != 0; }

    // Throws OutOfRangeError when t is not a key.
    const CalendarRow& row(TimeIndex t) const;

    const std::map<TimeIndex, CalendarRow>& rows() const { return rows_; }

private:
    std::map<TimeIndex, CalendarRow> rows_;
};

// Pure lookup into the period map.
PeriodIndex period_of(const CalendarTable& cal, TimeIndex t);

struct ValidationIssue {
    TimeIndex time = 0;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
};

// Checks contiguity of the key range, monotonicity of payPeriod, and the
// per-field value ranges. An empty report means the table is valid.
ValidationReport validate_calendar(const CalendarTable& cal);

class TimeSeries {
public:
    TimeSeries() = default;
    explicit TimeSeries(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void setName(std::string name) { name_ = std::move(name); }

    // Throws Error on nonfinite values; overwrites an existing key.
    void set(TimeIndex t, double value);
    bool contains(TimeIndex t) const { return values_.count(t) != 0; }
    double at(TimeIndex t) const;  // throws OutOfRangeError
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    const std::map<TimeIndex, double>& values() const { return values_; }

private:
    std::string name_;
    std::map<TimeIndex, double> values_;
};

struct Horizon {
    std::vector<TimeIndex> past;    // t <= 0
    std::vector<TimeIndex> future;  // t >= 1
};

// Partitions the series domain at the past/future boundary.
Horizon horizon_of(const TimeSeries& series);

enum class ParamKeying { PerInterval, PerPeriod };

// Learned decision parameters, keyed either by interval or by period.
class DecisionParameterTable {
public:
    DecisionParameterTable() = default;
    DecisionParameterTable(std::string name, ParamKeying keying)
        : name_(std::move(name)), keying_(keying) {}

    const std::string& name() const { return name_; }
    ParamKeying keying() const { return keying_; }

    void set(std::int32_t key, double value);
    bool contains(std::int32_t key) const { return values_.count(key) != 0; }
    double at(std::int32_t key) const;
    std::size_t size() const { return values_.size(); }
    const std::map<std::int32_t, double>& values() const { return values_; }

private:
    std::string name_;
    ParamKeying keying_ = ParamKeying::PerPeriod;
    std::map<std::int32_t, double> values_;
};

// Binary event indicator series.
class TimeEventSeries {
public:
    TimeEventSeries() = default;
    explicit TimeEventSeries(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }
    void set(TimeIndex t, int indicator);  // throws Error unless 0/1
    int at(TimeIndex t) const;
    std::size_t size() const { return values_.size(); }
    const std::map<TimeIndex, int>& values() const { return values_; }

private:
    std::string name_;
    std::map<TimeIndex, int> values_;
};

// Loaded data a compiled event is grounded against. The calendar also backs
// the attribute tables (PayPeriod, Year, Month, Day, WeekDay, Hour).
struct DataStore {
    CalendarTable calendar;
    std::map<std::string, TimeSeries, CiLess> series;

    const TimeSeries* find_series(std::string_view name) const;
};

// Shared run configuration for grounding and solving.
struct SolverConfig {
    double annualBound = 0.0;       // kWh of interruption allowed per year
    double timeIntervalSize = 1.0;  // hours per base interval
    int horizonYears = 2;
    double tolerance = 1e-6;  // relative feasibility tolerance
    double gridStep = 0.1;    // grid resolution for the exhaustive oracle (kW)
    std::int64_t maxExhaustiveCombos = 2'000'000;
    int refinementIters = 3;
};

}  // namespace mtsa
