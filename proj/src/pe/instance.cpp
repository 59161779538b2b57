#include "mtsa/pe/instance.hpp"

namespace mtsa::pe {

const ParameterSet* PEInstance::find_parameter(std::string_view name) const {
    for (const auto& p : parameterSets)
        if (ci_equal(p.name, name)) return &p;
    return nullptr;
}

double ParamAssignment::at(const std::string& param, std::int32_t key) const {
    auto it = values.find(param);
    if (it == values.end())
        throw OutOfRangeError("no assignment for parameter set " + param);
    auto vt = it->second.find(key);
    if (vt == it->second.end())
        throw OutOfRangeError("parameter " + param + " has no value at key " +
                              std::to_string(key));
    return vt->second;
}

std::optional<std::string> calendar_attribute(std::string_view tableName) {
    for (const char* attr : {"payPeriod", "year", "month", "day", "weekDay", "hour"})
        if (ci_equal(tableName, attr)) return std::string(attr);
    return std::nullopt;
}

bool compare(double lhs, sql::CmpOp op, double rhs) {
    switch (op) {
        case sql::CmpOp::Lt: return lhs < rhs;
        case sql::CmpOp::Le: return lhs <= rhs;
        case sql::CmpOp::Eq: return lhs == rhs;
        case sql::CmpOp::Ge: return lhs >= rhs;
        case sql::CmpOp::Gt: return lhs > rhs;
    }
    return false;
}

namespace {

double calendar_value(const std::string& attr, const CalendarRow& row) {
    if (attr == "payPeriod") return row.payPeriod;
    if (attr == "year") return row.year;
    if (attr == "month") return row.month;
    if (attr == "day") return row.day;
    if (attr == "weekDay") return row.weekDay;
    return row.hour;
}

}  // namespace

double term_value(const Term& term, TimeIndex t, PeriodIndex p, const DataStore& store,
                  const ParamAssignment& params) {
    double base = 0.0;
    switch (term.kind) {
        case Term::Kind::Constant:
            return term.offset;
        case Term::Kind::TimeVar:
            base = t;
            break;
        case Term::Kind::PeriodVar:
            base = p;
            break;
        case Term::Kind::Series:
            if (auto attr = calendar_attribute(term.name))
                base = calendar_value(*attr, store.calendar.row(t));
            else if (const TimeSeries* s = store.find_series(term.name))
                base = s->at(t);
            else
                throw OutOfRangeError("unknown series " + term.name);
            break;
        case Term::Kind::Param:
            base = params.at(term.name,
                             term.paramKey == ParamKeying::PerInterval ? t : p);
            break;
    }
    return term.scale * base + term.offset;
}

bool interpret(const Formula& formula, TimeIndex t, PeriodIndex p, const DataStore& store,
               const ParamAssignment& params) {
    switch (formula.kind) {
        case Formula::Kind::Atom: {
            const Atom& a = *formula.atom;
            return compare(term_value(a.lhs, t, p, store, params), a.op,
                           term_value(a.rhs, t, p, store, params));
        }
        case Formula::Kind::And:
            for (const Formula& child : formula.children)
                if (!interpret(child, t, p, store, params)) return false;
            return true;
        case Formula::Kind::Or:
            for (const Formula& child : formula.children)
                if (interpret(child, t, p, store, params)) return true;
            return false;
    }
    return false;
}

bool interpret(const Constraint& constraint, TimeIndex t, PeriodIndex p,
               const DataStore& store, const ParamAssignment& params) {
    if (std::holds_alternative<AtomicConstraint>(constraint))
        return interpret(std::get<AtomicConstraint>(constraint).formula, t, p, store, params);
    const auto& impl = std::get<ImplicationConstraint>(constraint);
    if (!interpret(impl.guard, t, p, store, params)) return true;
    const Atom& a = impl.consequent;
    return compare(term_value(a.lhs, t, p, store, params), a.op,
                   term_value(a.rhs, t, p, store, params));
}

}  // namespace mtsa::pe
