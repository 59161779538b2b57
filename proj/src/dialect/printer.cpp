#include "mtsa/dialect/printer.hpp"

#include <cmath>
#include <sstream>

#include "mtsa/csv.hpp"

namespace mtsa::sql {

namespace {

std::string quote(const std::string& literal) {
    std::string out = "'";
    for (char c : literal) {
        out += c;
        if (c == '\'') out += '\'';
    }
    out += '\'';
    return out;
}

std::string print_column_ref(const ColumnRef& ref) {
    return ref.qualifier.empty() ? ref.column : ref.qualifier + "." + ref.column;
}

std::string print_operand(const Operand& op) {
    if (std::holds_alternative<std::string>(op)) return quote(std::get<std::string>(op));
    return print_lin_expr(std::get<LinExpr>(op));
}

std::string print_case(const CaseWhen& cw) {
    std::string out = "(CASE WHEN " + print_bool_expr(cw.condition) + " THEN " +
                      quote(cw.thenLiteral);
    if (cw.elseLiteral) out += " ELSE " + quote(*cw.elseLiteral);
    out += " END)";
    return out;
}

std::string print_select_item(const SelectItem& item) {
    std::string out = std::holds_alternative<LinExpr>(item.value)
                          ? print_lin_expr(std::get<LinExpr>(item.value))
                          : print_case(std::get<CaseWhen>(item.value));
    if (!item.alias.empty()) out += " AS " + item.alias;
    return out;
}

std::string print_table_ref(const TableRef& ref) {
    return ref.alias.empty() ? ref.table : ref.table + " " + ref.alias;
}

template <typename T, typename Fn>
std::string join(const std::vector<T>& items, const char* sep, Fn&& fn) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += fn(items[i]);
    }
    return out;
}

std::string print_select(const Select& sel, const std::string& indent) {
    std::string out = indent + "SELECT " +
                      join(sel.items, ", ", [](const SelectItem& i) {
                          return print_select_item(i);
                      });
    out += "\n" + indent + "FROM " +
           join(sel.from, ", ", [](const TableRef& r) { return print_table_ref(r); });
    if (!sel.where.empty())
        out += "\n" + indent + "WHERE " +
               join(sel.where, " AND ", [](const Comparison& c) {
                   return print_comparison(c);
               });
    return out;
}

struct Printer {
    std::string operator()(const CreateTable& table) const {
        std::ostringstream out;
        out << "CREATE TABLE " << table.name << " (";
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i) out << ",";
            out << "\n    " << table.columns[i].name << " "
                << column_type_name(table.columns[i].type);
        }
        if (table.uniqueMap)
            out << ",\n    UNIQUE MAP(" << table.uniqueMap->timeColumn << ", "
                << table.uniqueMap->periodColumn << ")";
        out << ");";
        return out.str();
    }

    std::string operator()(const CreateView& view) const {
        return "CREATE VIEW " + view.name + " AS (\n" + print_select(view.select, "    ") +
               ");";
    }

    std::string operator()(const CreateEvent& event) const {
        std::ostringstream out;
        out << "CREATE EVENT " << event.name << " (\n    GC_LEARN "
            << join(event.learnParams, ", ", [](const std::string& s) { return s; });
        out << "\n    FOR " << (event.objective.minimize ? "MINIMIZE" : "MAXIMIZE") << " SUM("
            << print_column_ref(event.objective.summed) << ") AS " << event.objective.alias;
        for (std::size_t i = 0; i < event.withClauses.size(); ++i) {
            const WithClause& clause = event.withClauses[i];
            out << "\n    " << (i == 0 ? "WITH " : "AND ");
            if (clause.guard)
                out << print_column_ref(*clause.guard) << " = '1' THEN ";
            out << print_comparison(clause.inequality);
        }
        out << "\n    FROM "
            << join(event.from, ", ", [](const TableRef& r) { return print_table_ref(r); });
        if (!event.where.empty())
            out << "\n    WHERE "
                << join(event.where, " AND ",
                        [](const Comparison& c) { return print_comparison(c); });
        out << ");";
        return out.str();
    }

    std::string operator()(const MonitorStmt& m) const { return "MONITOR " + m.viewName + ";"; }

    std::string operator()(const ExecuteStmt& e) const {
        return "EXECUTE " + e.eventName + ";";
    }
};

}  // namespace

std::string print_lin_expr(const LinExpr& expr) {
    if (!expr.column) return format_number(expr.offset);
    std::string out;
    if (expr.scale != 1.0) out += format_number(expr.scale) + " * ";
    out += print_column_ref(*expr.column);
    if (expr.offset != 0.0) {
        out += expr.offset < 0 ? " - " : " + ";
        out += format_number(std::fabs(expr.offset));
    }
    return out;
}

std::string print_comparison(const Comparison& cmp) {
    return print_operand(cmp.lhs) + " " + std::string(cmp_op_text(cmp.op)) + " " +
           print_operand(cmp.rhs);
}

std::string print_bool_expr(const BoolExpr& expr) {
    if (expr.kind == BoolExpr::Kind::Cmp) return print_comparison(*expr.cmp);
    const char* sep = expr.kind == BoolExpr::Kind::And ? " AND " : " OR ";
    std::string out;
    for (std::size_t i = 0; i < expr.children.size(); ++i) {
        if (i) out += sep;
        const BoolExpr& child = expr.children[i];
        if (child.kind == BoolExpr::Kind::Cmp)
            out += print_bool_expr(child);
        else
            out += "(" + print_bool_expr(child) + ")";
    }
    return out;
}

std::string pretty_print(const Statement& stmt) { return std::visit(Printer{}, stmt); }

std::string pretty_print(const std::vector<Statement>& script) {
    std::string out;
    for (std::size_t i = 0; i < script.size(); ++i) {
        if (i) out += "\n\n";
        out += pretty_print(script[i]);
    }
    out += "\n";
    return out;
}

}  // namespace mtsa::sql
