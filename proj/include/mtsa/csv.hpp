#pragma once

#include <string>
#include <string_view>

#include "mtsa/core.hpp"

namespace mtsa {

class CsvError : public Error {
public:
    enum class Kind { Parse, DuplicateKey };

    CsvError(Kind kind, int line, const std::string& message)
        : Error("csv line " + std::to_string(line) + ": " + message),
          kind_(kind),
          line_(line) {}

    Kind kind() const { return kind_; }
    int line() const { return line_; }

private:
    Kind kind_;
    int line_;
};

// Header `time,value`; integer times, real values; duplicate times rejected.
TimeSeries load_series(std::string_view csvText, std::string name);
std::string serialize_series(const TimeSeries& series);

// Header `time,payPeriod,year,month,day,hour,weekDay`.
CalendarTable load_calendar(std::string_view csvText);
std::string serialize_calendar(const CalendarTable& cal);

// Per-period tables use header `time,period,value` (values broadcast over
// the intervals of each period); per-interval tables use `time,value`.
DecisionParameterTable load_parameter_table(std::string_view csvText, std::string name,
                                            ParamKeying keying);

// Writes a number in the shortest form that parses back exactly.
std::string format_number(double v);

}  // namespace mtsa
