#pragma once

#include <map>
#include <optional>
#include <string>

#include "mtsa/dialect/ast.hpp"
#include "mtsa/pe/instance.hpp"

namespace mtsa::pe {

class CompileError : public Error {
public:
    enum class Kind { UnresolvedReference, NonLinearObjective, UnsupportedGuardShape };

    CompileError(Kind kind, const std::string& message)
        : Error("compile error: " + message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Named table/view/event definitions; CREATE statements upsert.
struct Catalog {
    std::map<std::string, sql::CreateTable, CiLess> tables;
    std::map<std::string, sql::CreateView, CiLess> views;
    std::map<std::string, sql::CreateEvent, CiLess> events;

    void add(const sql::Statement& stmt);
    const sql::CreateTable* find_table(std::string_view name) const;
    const sql::CreateView* find_view(std::string_view name) const;
    const sql::CreateEvent* find_event(std::string_view name) const;
};

// Lowers a learning event and its referenced views into the symbolic
// parameter-estimation tuple <S, P, C_P, C_M, O>.
PEInstance compile_event(const sql::CreateEvent& event, const Catalog& catalog);

// Semantics of a view's CASE item, shared with the monitor engine. Exactly
// one of indicatorTest / condition is set: an action view tests another
// view's Indicator column, an indicator view carries a resolved condition
// with join conjuncts dropped and the period binding made explicit.
struct ViewCase {
    std::string viewName;
    std::string caseAlias;
    std::optional<sql::ColumnRef> indicatorTest;
    std::optional<Formula> condition;
    std::string thenLiteral;
    std::optional<std::string> elseLiteral;
};

ViewCase analyze_view_case(const sql::CreateView& view, const Catalog& catalog);

}  // namespace mtsa::pe
