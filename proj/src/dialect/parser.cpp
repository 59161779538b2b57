#include "mtsa/dialect/parser.hpp"

#include <charconv>

namespace mtsa::sql {

namespace {

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    std::vector<Statement> script() {
        std::vector<Statement> out;
        while (peek().kind != TokenKind::End) out.push_back(statement());
        return out;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < tokens_.size() ? tokens_[i] : tokens_.back();
    }

    const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        std::string got = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
        throw SyntaxError(t.line, t.column, "expected " + expected + ", got " + got);
    }

    bool accept_keyword(std::string_view kw) {
        if (peek().is_keyword(kw)) {
            advance();
            return true;
        }
        return false;
    }

    void expect_keyword(std::string_view kw) {
        if (!accept_keyword(kw)) fail(std::string(kw));
    }

    bool accept_symbol(std::string_view s) {
        if (peek().is_symbol(s)) {
            advance();
            return true;
        }
        return false;
    }

    void expect_symbol(std::string_view s) {
        if (!accept_symbol(s)) fail("'" + std::string(s) + "'");
    }

    std::string identifier(const std::string& what) {
        if (peek().kind != TokenKind::Identifier) fail(what);
        return advance().text;
    }

    double number(const std::string& what) {
        bool negative = false;
        if (peek().is_symbol("-")) {
            advance();
            negative = true;
        }
        if (peek().kind != TokenKind::Number) fail(what);
        const std::string& text = advance().text;
        double value = 0;
        std::from_chars(text.data(), text.data() + text.size(), value);
        return negative ? -value : value;
    }

    std::string string_literal(const std::string& what) {
        if (peek().kind != TokenKind::String) fail(what);
        return advance().text;
    }

    Statement statement() {
        if (accept_keyword("CREATE")) {
            if (accept_keyword("TABLE")) return create_table();
            if (accept_keyword("VIEW")) return create_view();
            if (accept_keyword("EVENT")) return create_event();
            const Token& t = peek();
            throw UnknownKeywordError(t.line, t.column,
                                      "unknown CREATE target '" + t.text + "'");
        }
        if (accept_keyword("MONITOR")) {
            MonitorStmt m{identifier("view name")};
            expect_symbol(";");
            return m;
        }
        if (accept_keyword("EXECUTE")) {
            ExecuteStmt e{identifier("event name")};
            expect_symbol(";");
            return e;
        }
        const Token& t = peek();
        throw UnknownKeywordError(t.line, t.column, "unknown statement '" + t.text + "'");
    }

    ColumnType column_type() {
        const Token& t = peek();
        std::string name = identifier("column type");
        for (ColumnType ct :
             {ColumnType::HourlyInterval, ColumnType::DailyInterval,
              ColumnType::MonthlyInterval, ColumnType::QuarterlyInterval,
              ColumnType::YearlyInterval, ColumnType::Real, ColumnType::Integer})
            if (ci_equal(name, column_type_name(ct))) return ct;
        throw UnknownKeywordError(t.line, t.column, "unknown column type '" + name + "'");
    }

    Statement create_table() {
        CreateTable table;
        table.name = identifier("table name");
        expect_symbol("(");
        while (true) {
            if (peek().is_keyword("UNIQUE") || peek().is_keyword("UNIQUE_MAP")) {
                bool spaced = accept_keyword("UNIQUE");
                if (spaced)
                    expect_keyword("MAP");
                else
                    expect_keyword("UNIQUE_MAP");
                expect_symbol("(");
                UniqueMap map;
                map.timeColumn = identifier("time column");
                expect_symbol(",");
                map.periodColumn = identifier("period column");
                expect_symbol(")");
                table.uniqueMap = map;
            } else {
                ColumnDef col;
                col.name = identifier("column name");
                col.type = column_type();
                table.columns.push_back(col);
            }
            if (!accept_symbol(",")) break;
        }
        expect_symbol(")");
        expect_symbol(";");
        if (table.uniqueMap) {
            for (const auto& which : {table.uniqueMap->timeColumn, table.uniqueMap->periodColumn}) {
                bool found = false;
                for (const auto& col : table.columns)
                    if (ci_equal(col.name, which)) found = true;
                if (!found) {
                    const Token& t = peek();
                    throw SyntaxError(t.line, t.column,
                                      "UNIQUE MAP column '" + which + "' not declared");
                }
            }
        }
        return table;
    }

    Statement create_view() {
        CreateView view;
        view.name = identifier("view name");
        expect_keyword("AS");
        bool parens = accept_symbol("(");
        view.select = select();
        if (parens) expect_symbol(")");
        expect_symbol(";");
        return view;
    }

    Select select() {
        expect_keyword("SELECT");
        Select sel;
        do {
            sel.items.push_back(select_item());
        } while (accept_symbol(","));
        expect_keyword("FROM");
        do {
            sel.from.push_back(table_ref());
        } while (accept_symbol(","));
        if (accept_keyword("WHERE")) {
            do {
                sel.where.push_back(comparison());
            } while (accept_keyword("AND"));
        }
        return sel;
    }

    SelectItem select_item() {
        SelectItem item;
        if (peek().is_symbol("(") && peek(1).is_keyword("CASE")) {
            advance();
            item.value = case_when();
            expect_symbol(")");
        } else if (peek().is_keyword("CASE")) {
            item.value = case_when();
        } else {
            item.value = lin_expr();
        }
        if (accept_keyword("AS")) item.alias = identifier("alias");
        return item;
    }

    CaseWhen case_when() {
        expect_keyword("CASE");
        expect_keyword("WHEN");
        CaseWhen cw;
        cw.condition = bool_expr();
        expect_keyword("THEN");
        cw.thenLiteral = string_literal("string literal");
        if (accept_keyword("ELSE")) cw.elseLiteral = string_literal("string literal");
        expect_keyword("END");
        return cw;
    }

    TableRef table_ref() {
        TableRef ref;
        ref.table = identifier("table name");
        if (peek().kind == TokenKind::Identifier && !peek().is_keyword("WHERE") &&
            !peek().is_keyword("AND") && !peek().is_keyword("FROM"))
            ref.alias = advance().text;
        return ref;
    }

    BoolExpr bool_expr() { return or_expr(); }

    BoolExpr or_expr() {
        BoolExpr first = and_expr();
        if (!peek().is_keyword("OR")) return first;
        BoolExpr node;
        node.kind = BoolExpr::Kind::Or;
        node.children.push_back(std::move(first));
        while (accept_keyword("OR")) node.children.push_back(and_expr());
        return node;
    }

    BoolExpr and_expr() {
        BoolExpr first = bool_primary();
        if (!peek().is_keyword("AND")) return first;
        BoolExpr node;
        node.kind = BoolExpr::Kind::And;
        node.children.push_back(std::move(first));
        while (accept_keyword("AND")) node.children.push_back(bool_primary());
        return node;
    }

    BoolExpr bool_primary() {
        if (peek().is_symbol("(")) {
            advance();
            BoolExpr inner = or_expr();
            expect_symbol(")");
            return inner;
        }
        BoolExpr leaf;
        leaf.kind = BoolExpr::Kind::Cmp;
        leaf.cmp = comparison();
        return leaf;
    }

    CmpOp cmp_op() {
        for (CmpOp op : {CmpOp::Le, CmpOp::Ge, CmpOp::Lt, CmpOp::Gt, CmpOp::Eq})
            if (peek().is_symbol(cmp_op_text(op))) {
                advance();
                return op;
            }
        fail("comparison operator");
    }

    Comparison comparison() {
        Comparison cmp;
        cmp.lhs = operand();
        cmp.op = cmp_op();
        cmp.rhs = operand();
        return cmp;
    }

    Operand operand() {
        if (peek().kind == TokenKind::String) return advance().text;
        return lin_expr();
    }

    ColumnRef column_ref() {
        ColumnRef ref;
        ref.column = identifier("column reference");
        if (accept_symbol(".")) {
            ref.qualifier = std::move(ref.column);
            ref.column = identifier("column name");
        }
        return ref;
    }

    LinExpr lin_expr() {
        LinExpr expr;
        if (peek().kind == TokenKind::Number || peek().is_symbol("-")) {
            double n = number("number");
            if (accept_symbol("*")) {
                expr.scale = n;
                expr.column = column_ref();
            } else {
                expr.column = std::nullopt;
                expr.offset = n;
                return expr;
            }
        } else {
            expr.column = column_ref();
        }
        if (peek().is_symbol("+") || peek().is_symbol("-")) {
            bool minus = peek().is_symbol("-");
            advance();
            double n = number("number");
            expr.offset = minus ? -n : n;
        }
        return expr;
    }

    Statement create_event() {
        CreateEvent event;
        event.name = identifier("event name");
        expect_symbol("(");
        expect_keyword("GC_LEARN");
        do {
            event.learnParams.push_back(identifier("parameter table name"));
        } while (accept_symbol(","));
        expect_keyword("FOR");
        if (accept_keyword("MINIMIZE"))
            event.objective.minimize = true;
        else if (accept_keyword("MAXIMIZE"))
            event.objective.minimize = false;
        else
            fail("MINIMIZE or MAXIMIZE");
        expect_keyword("SUM");
        expect_symbol("(");
        event.objective.summed = column_ref();
        expect_symbol(")");
        expect_keyword("AS");
        event.objective.alias = identifier("objective alias");
        expect_keyword("WITH");
        do {
            event.withClauses.push_back(with_clause());
        } while (accept_keyword("AND"));
        expect_keyword("FROM");
        do {
            event.from.push_back(table_ref());
        } while (accept_symbol(","));
        if (accept_keyword("WHERE")) {
            do {
                event.where.push_back(comparison());
            } while (accept_keyword("AND"));
        }
        expect_symbol(")");
        expect_symbol(";");
        return event;
    }

    // Either `alias.Indicator = '1' THEN <inequality>` or a plain inequality.
    WithClause with_clause() {
        WithClause clause;
        std::size_t save = pos_;
        if (peek().kind == TokenKind::Identifier) {
            ColumnRef ref = column_ref();
            if (accept_symbol("=") && peek().kind == TokenKind::String) {
                std::string lit = advance().text;
                if (accept_keyword("THEN")) {
                    const Token& t = tokens_[save];
                    if (!ci_equal(ref.column, "Indicator"))
                        throw SyntaxError(t.line, t.column,
                                          "implication guard must test an Indicator column");
                    if (lit != "1")
                        throw SyntaxError(t.line, t.column,
                                          "implication guard must compare to '1'");
                    clause.guard = ref;
                    clause.inequality = comparison();
                    return clause;
                }
            }
            pos_ = save;
        }
        clause.inequality = comparison();
        return clause;
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<Statement> parse_script(std::string_view text) {
    return Parser(tokenize(text)).script();
}

Statement parse_statement(std::string_view text) {
    auto statements = parse_script(text);
    if (statements.size() != 1)
        throw SyntaxError(1, 1, "expected exactly one statement, got " +
                                    std::to_string(statements.size()));
    return std::move(statements.front());
}

}  // namespace mtsa::sql
