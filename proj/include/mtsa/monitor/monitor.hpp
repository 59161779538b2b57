#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mtsa/core.hpp"
#include "mtsa/dialect/ast.hpp"
#include "mtsa/pe/compiler.hpp"

namespace mtsa::monitor {

class MonitorError : public Error {
public:
    enum class Kind { UnsupportedViewShape, MissingParameter, OutOfRange, UnorderedStream };

    MonitorError(Kind kind, const std::string& message)
        : Error("monitor error: " + message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct MonitoringRule {
    std::string seriesName;               // the monitored input series
    sql::CmpOp guardOp = sql::CmpOp::Gt;  // fires when value <op> threshold
    DecisionParameterTable thresholds;    // per-period learned bounds
    CalendarTable calendar;
    std::string actionText;  // empty when the view carries no action literal
};

struct StreamRecord {
    TimeIndex time = 0;
    double value = 0.0;
};

struct Recommendation {
    TimeIndex time = 0;
    int indicator = 0;
    std::optional<std::string> action;  // present iff indicator == 1
    double value = 0.0;
    double threshold = 0.0;
};

// The static shape of a MONITOR'd view: which series it watches, which
// parameter table it compares against, and the action literal, if any.
struct RuleShape {
    std::string seriesName;
    std::string paramName;
    sql::CmpOp op = sql::CmpOp::Gt;
    std::string actionText;
};

RuleShape resolve_rule_shape(const std::string& viewName, const pe::Catalog& catalog);

// Resolves a MONITOR'd view, possibly through one indicator view, into a
// threshold rule. The parameter table must cover every future period of the
// calendar.
MonitoringRule compile_monitor(const std::string& viewName, const pe::Catalog& catalog,
                               const DecisionParameterTable& params,
                               const CalendarTable& calendar);

Recommendation step(const MonitoringRule& rule, const StreamRecord& record);

// Applies step over a time-ordered stream; when log is given, one JSON line
// is appended per record.
std::vector<Recommendation> replay(const MonitoringRule& rule,
                                   const std::vector<StreamRecord>& stream,
                                   std::ostream* log = nullptr);

std::string recommendation_to_json(const Recommendation& rec);

// Accepts `time,value` lines, with or without a leading header.
std::vector<StreamRecord> parse_stream(std::string_view text);

}  // namespace mtsa::monitor
