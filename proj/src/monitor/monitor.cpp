#include "mtsa/monitor/monitor.hpp"

#include <charconv>

#include "json.hpp"
#include "mtsa/csv.hpp"
#include "mtsa/pe/instance.hpp"

namespace mtsa::monitor {

namespace {

[[noreturn]] void bad_shape(const std::string& message) {
    throw MonitorError(MonitorError::Kind::UnsupportedViewShape, message);
}

struct GuardShape {
    std::string seriesName;
    std::string paramName;
    sql::CmpOp op;  // normalized: series <op> parameter
};

sql::CmpOp flip(sql::CmpOp op) {
    switch (op) {
        case sql::CmpOp::Lt: return sql::CmpOp::Gt;
        case sql::CmpOp::Le: return sql::CmpOp::Ge;
        case sql::CmpOp::Gt: return sql::CmpOp::Lt;
        case sql::CmpOp::Ge: return sql::CmpOp::Le;
        default: return op;
    }
}

// The indicator condition must reduce to a single series-vs-parameter
// comparison plus the period binding of the time-joined parameter table.
GuardShape extract_guard(const pe::Formula& condition, const std::string& viewName) {
    std::vector<const pe::Formula*> conjuncts;
    if (condition.kind == pe::Formula::Kind::And)
        for (const auto& child : condition.children) conjuncts.push_back(&child);
    else
        conjuncts.push_back(&condition);

    std::optional<GuardShape> shape;
    bool sawBinding = false;
    for (const pe::Formula* f : conjuncts) {
        if (f->kind != pe::Formula::Kind::Atom)
            bad_shape("view " + viewName + " has a nested condition");
        const pe::Atom& a = *f->atom;
        auto isSeries = [](const pe::Term& t) {
            return t.kind == pe::Term::Kind::Series && !pe::calendar_attribute(t.name) &&
                   t.scale == 1.0 && t.offset == 0.0;
        };
        auto isParam = [](const pe::Term& t) {
            return t.kind == pe::Term::Kind::Param &&
                   t.paramKey == ParamKeying::PerPeriod && t.scale == 1.0 &&
                   t.offset == 0.0;
        };
        if (isSeries(a.lhs) && isParam(a.rhs)) {
            if (shape) bad_shape("view " + viewName + " compares more than one threshold");
            shape = GuardShape{a.lhs.name, a.rhs.name, a.op};
            continue;
        }
        if (isSeries(a.rhs) && isParam(a.lhs)) {
            if (shape) bad_shape("view " + viewName + " compares more than one threshold");
            shape = GuardShape{a.rhs.name, a.lhs.name, flip(a.op)};
            continue;
        }
        bool binding = a.op == sql::CmpOp::Eq &&
                       ((a.lhs.kind == pe::Term::Kind::Series &&
                         a.rhs.kind == pe::Term::Kind::PeriodVar) ||
                        (a.rhs.kind == pe::Term::Kind::Series &&
                         a.lhs.kind == pe::Term::Kind::PeriodVar));
        if (!binding)
            bad_shape("view " + viewName + " has a condition beyond a threshold test");
        sawBinding = true;
    }
    if (!shape)
        bad_shape("view " + viewName + " does not compare a series to a parameter");
    if (!sawBinding)
        bad_shape("view " + viewName + " does not join the parameter table on time");
    return *shape;
}

}  // namespace

RuleShape resolve_rule_shape(const std::string& viewName, const pe::Catalog& catalog) {
    const sql::CreateView* view = catalog.find_view(viewName);
    if (!view) bad_shape("view " + viewName + " is not defined");

    pe::ViewCase vc;
    try {
        vc = pe::analyze_view_case(*view, catalog);
    } catch (const pe::CompileError& e) {
        bad_shape(e.what());
    }

    RuleShape shape;
    const sql::CreateView* indicatorView = view;

    if (vc.indicatorTest) {
        shape.actionText = vc.thenLiteral;
        if (!ci_equal(vc.indicatorTest->column, "Indicator"))
            bad_shape("view " + viewName + " must test an Indicator column");
        const std::string& alias = vc.indicatorTest->qualifier;
        const sql::TableRef* ref = nullptr;
        for (const auto& r : view->select.from)
            if (ci_equal(r.binding(), alias)) ref = &r;
        if (!ref) bad_shape("view " + viewName + " references unknown alias " + alias);
        indicatorView = catalog.find_view(ref->table);
        if (!indicatorView)
            bad_shape("view " + viewName + " monitors " + ref->table + ", which is not a view");
        try {
            vc = pe::analyze_view_case(*indicatorView, catalog);
        } catch (const pe::CompileError& e) {
            bad_shape(e.what());
        }
    }

    if (vc.indicatorTest)
        bad_shape("view " + indicatorView->name + " tests another Indicator; only one level "
                  "of indirection is supported");
    if (!ci_equal(vc.caseAlias, "Indicator"))
        bad_shape("view " + indicatorView->name + " lacks an Indicator column");

    GuardShape guard = extract_guard(*vc.condition, indicatorView->name);
    shape.seriesName = guard.seriesName;
    shape.paramName = guard.paramName;
    shape.op = guard.op;
    return shape;
}

MonitoringRule compile_monitor(const std::string& viewName, const pe::Catalog& catalog,
                               const DecisionParameterTable& params,
                               const CalendarTable& calendar) {
    RuleShape shape = resolve_rule_shape(viewName, catalog);

    MonitoringRule rule;
    rule.seriesName = shape.seriesName;
    rule.guardOp = shape.op;
    rule.actionText = shape.actionText;

    if (!ci_equal(params.name(), shape.paramName))
        throw MonitorError(MonitorError::Kind::MissingParameter,
                           "rule needs parameter table " + shape.paramName + ", got " +
                               params.name());
    for (const auto& [t, row] : calendar.rows()) {
        if (t <= 0) continue;
        if (!params.contains(row.payPeriod))
            throw MonitorError(MonitorError::Kind::MissingParameter,
                               "parameter table " + params.name() + " misses period " +
                                   std::to_string(row.payPeriod));
    }

    rule.thresholds = params;
    rule.calendar = calendar;
    return rule;
}

Recommendation step(const MonitoringRule& rule, const StreamRecord& record) {
    if (!rule.calendar.contains(record.time))
        throw MonitorError(MonitorError::Kind::OutOfRange,
                           "record time " + std::to_string(record.time) +
                               " outside the calendar");
    PeriodIndex p = period_of(rule.calendar, record.time);
    if (!rule.thresholds.contains(p))
        throw MonitorError(MonitorError::Kind::MissingParameter,
                           "no threshold for period " + std::to_string(p));
    double threshold = rule.thresholds.at(p);

    Recommendation rec;
    rec.time = record.time;
    rec.value = record.value;
    rec.threshold = threshold;
    rec.indicator = pe::compare(record.value, rule.guardOp, threshold) ? 1 : 0;
    if (rec.indicator == 1 && !rule.actionText.empty()) rec.action = rule.actionText;
    return rec;
}

std::vector<Recommendation> replay(const MonitoringRule& rule,
                                   const std::vector<StreamRecord>& stream,
                                   std::ostream* log) {
    std::vector<Recommendation> out;
    out.reserve(stream.size());
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (i > 0 && stream[i].time <= stream[i - 1].time)
            throw MonitorError(MonitorError::Kind::UnorderedStream,
                               "record " + std::to_string(i) + " at time " +
                                   std::to_string(stream[i].time) + " is not after " +
                                   std::to_string(stream[i - 1].time));
        out.push_back(step(rule, stream[i]));
        if (log) *log << recommendation_to_json(out.back()) << '\n';
    }
    return out;
}

std::string recommendation_to_json(const Recommendation& rec) {
    nlohmann::json j;
    j["time"] = rec.time;
    j["indicator"] = rec.indicator;
    if (rec.action) j["action"] = *rec.action;
    j["value"] = rec.value;
    j["threshold"] = rec.threshold;
    return j.dump();
}

std::vector<StreamRecord> parse_stream(std::string_view text) {
    std::vector<StreamRecord> records;
    std::size_t pos = 0;
    int lineNo = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++lineNo;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.remove_suffix(1);
        while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string_view::npos)
            throw CsvError(CsvError::Kind::Parse, lineNo, "expected time,value");
        std::string_view timeField = line.substr(0, comma);
        std::string_view valueField = line.substr(comma + 1);
        if (lineNo == 1 && ci_equal(timeField, "time")) continue;  // optional header
        StreamRecord rec;
        auto [p1, e1] =
            std::from_chars(timeField.data(), timeField.data() + timeField.size(), rec.time);
        auto [p2, e2] = std::from_chars(valueField.data(),
                                        valueField.data() + valueField.size(), rec.value);
        if (e1 != std::errc{} || p1 != timeField.data() + timeField.size() ||
            e2 != std::errc{} || p2 != valueField.data() + valueField.size())
            throw CsvError(CsvError::Kind::Parse, lineNo,
                           "bad record '" + std::string(line) + "'");
        records.push_back(rec);
    }
    return records;
}

}  // namespace mtsa::monitor
