#include "mtsa/dialect/ast.hpp"

namespace mtsa::sql {

bool is_interval_type(ColumnType t) {
    return t != ColumnType::Real && t != ColumnType::Integer;
}

bool is_period_interval_type(ColumnType t) {
    switch (t) {
        case ColumnType::DailyInterval:
        case ColumnType::MonthlyInterval:
        case ColumnType::QuarterlyInterval:
        case ColumnType::YearlyInterval:
            return true;
        default:
            return false;
    }
}

std::string_view column_type_name(ColumnType t) {
    switch (t) {
        case ColumnType::HourlyInterval: return "HOURLY_INTERVAL";
        case ColumnType::DailyInterval: return "DAILY_INTERVAL";
        case ColumnType::MonthlyInterval: return "MONTHLY_INTERVAL";
        case ColumnType::QuarterlyInterval: return "QUARTERLY_INTERVAL";
        case ColumnType::YearlyInterval: return "YEARLY_INTERVAL";
        case ColumnType::Real: return "REAL";
        case ColumnType::Integer: return "INTEGER";
    }
    return "REAL";
}

std::string_view cmp_op_text(CmpOp op) {
    switch (op) {
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Eq: return "=";
        case CmpOp::Ge: return ">=";
        case CmpOp::Gt: return ">";
    }
    return "=";
}

namespace {

bool eq(const ColumnRef& a, const ColumnRef& b);
bool eq(const LinExpr& a, const LinExpr& b);
bool eq(const Operand& a, const Operand& b);
bool eq(const Comparison& a, const Comparison& b);
bool eq(const BoolExpr& a, const BoolExpr& b);
bool eq(const CaseWhen& a, const CaseWhen& b);
bool eq(const SelectItem& a, const SelectItem& b);
bool eq(const TableRef& a, const TableRef& b);
bool eq(const Select& a, const Select& b);
bool eq(const CreateTable& a, const CreateTable& b);
bool eq(const WithClause& a, const WithClause& b);
bool eq(const CreateEvent& a, const CreateEvent& b);

bool eq(const ColumnRef& a, const ColumnRef& b) {
    return ci_equal(a.qualifier, b.qualifier) && ci_equal(a.column, b.column);
}

bool eq(const LinExpr& a, const LinExpr& b) {
    if (a.column.has_value() != b.column.has_value()) return false;
    if (a.column && !eq(*a.column, *b.column)) return false;
    return a.scale == b.scale && a.offset == b.offset;
}

bool eq(const Operand& a, const Operand& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<LinExpr>(a))
        return eq(std::get<LinExpr>(a), std::get<LinExpr>(b));
    return std::get<std::string>(a) == std::get<std::string>(b);
}

bool eq(const Comparison& a, const Comparison& b) {
    return a.op == b.op && eq(a.lhs, b.lhs) && eq(a.rhs, b.rhs);
}

bool eq(const BoolExpr& a, const BoolExpr& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == BoolExpr::Kind::Cmp) return eq(*a.cmp, *b.cmp);
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!eq(a.children[i], b.children[i])) return false;
    return true;
}

bool eq(const CaseWhen& a, const CaseWhen& b) {
    return eq(a.condition, b.condition) && a.thenLiteral == b.thenLiteral &&
           a.elseLiteral == b.elseLiteral;
}

bool eq(const SelectItem& a, const SelectItem& b) {
    if (!ci_equal(a.alias, b.alias)) return false;
    if (a.value.index() != b.value.index()) return false;
    if (std::holds_alternative<LinExpr>(a.value))
        return eq(std::get<LinExpr>(a.value), std::get<LinExpr>(b.value));
    return eq(std::get<CaseWhen>(a.value), std::get<CaseWhen>(b.value));
}

bool eq(const TableRef& a, const TableRef& b) {
    return ci_equal(a.table, b.table) && ci_equal(a.alias, b.alias);
}

template <typename T>
bool eq_vec(const std::vector<T>& a, const std::vector<T>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i], b[i])) return false;
    return true;
}

bool eq(const Select& a, const Select& b) {
    return eq_vec(a.items, b.items) && eq_vec(a.from, b.from) && eq_vec(a.where, b.where);
}

bool eq(const CreateTable& a, const CreateTable& b) {
    if (!ci_equal(a.name, b.name)) return false;
    if (a.columns.size() != b.columns.size()) return false;
    for (std::size_t i = 0; i < a.columns.size(); ++i)
        if (!ci_equal(a.columns[i].name, b.columns[i].name) ||
            a.columns[i].type != b.columns[i].type)
            return false;
    if (a.uniqueMap.has_value() != b.uniqueMap.has_value()) return false;
    if (a.uniqueMap &&
        (!ci_equal(a.uniqueMap->timeColumn, b.uniqueMap->timeColumn) ||
         !ci_equal(a.uniqueMap->periodColumn, b.uniqueMap->periodColumn)))
        return false;
    return true;
}

bool eq(const WithClause& a, const WithClause& b) {
    if (a.guard.has_value() != b.guard.has_value()) return false;
    if (a.guard && !eq(*a.guard, *b.guard)) return false;
    return eq(a.inequality, b.inequality);
}

bool eq(const CreateEvent& a, const CreateEvent& b) {
    if (!ci_equal(a.name, b.name)) return false;
    if (a.learnParams.size() != b.learnParams.size()) return false;
    for (std::size_t i = 0; i < a.learnParams.size(); ++i)
        if (!ci_equal(a.learnParams[i], b.learnParams[i])) return false;
    if (a.objective.minimize != b.objective.minimize ||
        !eq(a.objective.summed, b.objective.summed) ||
        !ci_equal(a.objective.alias, b.objective.alias))
        return false;
    return eq_vec(a.withClauses, b.withClauses) && eq_vec(a.from, b.from) &&
           eq_vec(a.where, b.where);
}

}  // namespace

bool ast_equal(const Comparison& a, const Comparison& b) { return eq(a, b); }
bool ast_equal(const BoolExpr& a, const BoolExpr& b) { return eq(a, b); }

bool ast_equal(const Statement& a, const Statement& b) {
    if (a.index() != b.index()) return false;
    return std::visit(
        [&](const auto& lhs) {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b);
            if constexpr (std::is_same_v<T, CreateView>)
                return ci_equal(lhs.name, rhs.name) && eq(lhs.select, rhs.select);
            else if constexpr (std::is_same_v<T, MonitorStmt>)
                return ci_equal(lhs.viewName, rhs.viewName);
            else if constexpr (std::is_same_v<T, ExecuteStmt>)
                return ci_equal(lhs.eventName, rhs.eventName);
            else
                return eq(lhs, rhs);
        },
        a);
}

bool ast_equal(const std::vector<Statement>& a, const std::vector<Statement>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!ast_equal(a[i], b[i])) return false;
    return true;
}

}  // namespace mtsa::sql
