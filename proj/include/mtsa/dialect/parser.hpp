#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mtsa/dialect/ast.hpp"
#include "mtsa/dialect/lexer.hpp"

namespace mtsa::sql {

class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, const std::string& message)
        : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
                ": " + message),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class UnknownKeywordError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

// Parses a script of `;`-terminated statements.
std::vector<Statement> parse_script(std::string_view text);

// Convenience for single-statement inputs.
Statement parse_statement(std::string_view text);

}  // namespace mtsa::sql
