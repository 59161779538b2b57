#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mtsa/core.hpp"

namespace mtsa::sql {

enum class TokenKind {
    Identifier,  // keywords are identifiers matched case-insensitively
    Number,
    String,  // single-quoted literal, quotes stripped
    Symbol,  // one of ( ) , ; . = < > <= >= * + -
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    int line = 0;
    int column = 0;

    bool is_symbol(std::string_view s) const {
        return kind == TokenKind::Symbol && text == s;
    }
    bool is_keyword(std::string_view kw) const {
        return kind == TokenKind::Identifier && ci_equal(text, kw);
    }
};

class LexError : public Error {
public:
    LexError(int line, int column, const std::string& message)
        : Error("lex error at " + std::to_string(line) + ":" + std::to_string(column) + ": " +
                message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// Comments run from `--` to end of line. String literals are single-quoted
// and single-line; an embedded quote is doubled (''), SQL style.
std::vector<Token> tokenize(std::string_view text);

}  // namespace mtsa::sql
