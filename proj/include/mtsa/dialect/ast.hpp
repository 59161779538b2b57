#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mtsa/core.hpp"

namespace mtsa::sql {

enum class ColumnType {
    HourlyInterval,
    DailyInterval,
    MonthlyInterval,
    QuarterlyInterval,
    YearlyInterval,
    Real,
    Integer,
};

bool is_interval_type(ColumnType t);
bool is_period_interval_type(ColumnType t);
std::string_view column_type_name(ColumnType t);

struct ColumnDef {
    std::string name;
    ColumnType type = ColumnType::Real;
};

struct UniqueMap {
    std::string timeColumn;
    std::string periodColumn;
};

struct CreateTable {
    std::string name;
    std::vector<ColumnDef> columns;
    std::optional<UniqueMap> uniqueMap;
};

struct ColumnRef {
    std::string qualifier;  // empty for an unqualified column
    std::string column;
};

// Single-term linear expression: scale * column + offset. A pure constant
// has no column and carries the value in offset.
struct LinExpr {
    std::optional<ColumnRef> column;
    double scale = 1.0;
    double offset = 0.0;
};

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

std::string_view cmp_op_text(CmpOp op);

// An operand is either a linear expression or a quoted string literal
// (indicator tests such as X.Indicator = '1').
using Operand = std::variant<LinExpr, std::string>;

struct Comparison {
    Operand lhs;
    CmpOp op = CmpOp::Eq;
    Operand rhs;
};

struct BoolExpr {
    enum class Kind { Cmp, And, Or };
    Kind kind = Kind::Cmp;
    std::optional<Comparison> cmp;   // set when kind == Cmp
    std::vector<BoolExpr> children;  // set when kind == And/Or
};

struct CaseWhen {
    BoolExpr condition;
    std::string thenLiteral;
    std::optional<std::string> elseLiteral;
};

struct SelectItem {
    std::variant<LinExpr, CaseWhen> value;
    std::string alias;  // empty when not aliased
};

struct TableRef {
    std::string table;
    std::string alias;  // empty when not aliased

    const std::string& binding() const { return alias.empty() ? table : alias; }
};

struct Select {
    std::vector<SelectItem> items;
    std::vector<TableRef> from;
    std::vector<Comparison> where;  // conjunction of equality joins
};

struct CreateView {
    std::string name;
    Select select;
};

// One WITH-clause constraint: either a plain inequality, or an implication
// `<alias>.Indicator = '1' THEN <inequality>`.
struct WithClause {
    std::optional<ColumnRef> guard;
    Comparison inequality;
};

struct Objective {
    bool minimize = true;
    ColumnRef summed;   // SUM(<qualifier>.<column>)
    std::string alias;  // AS <alias>
};

struct CreateEvent {
    std::string name;
    std::vector<std::string> learnParams;
    Objective objective;
    std::vector<WithClause> withClauses;
    std::vector<TableRef> from;
    std::vector<Comparison> where;
};

struct MonitorStmt {
    std::string viewName;
};

struct ExecuteStmt {
    std::string eventName;
};

using Statement = std::variant<CreateTable, CreateView, CreateEvent, MonitorStmt, ExecuteStmt>;

// Structural equality. Identifiers (table, column, alias, view names)
// compare case-insensitively; string literals compare exactly.
bool ast_equal(const Statement& a, const Statement& b);
bool ast_equal(const std::vector<Statement>& a, const std::vector<Statement>& b);
bool ast_equal(const BoolExpr& a, const BoolExpr& b);
bool ast_equal(const Comparison& a, const Comparison& b);

}  // namespace mtsa::sql
