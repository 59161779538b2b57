#pragma once

#include <string>

#include "mtsa/dialect/ast.hpp"

namespace mtsa::sql {

// Canonical text; parse_script(pretty_print(s)) is structurally equal to {s}.
std::string pretty_print(const Statement& stmt);
std::string pretty_print(const std::vector<Statement>& script);

std::string print_bool_expr(const BoolExpr& expr);
std::string print_comparison(const Comparison& cmp);
std::string print_lin_expr(const LinExpr& expr);

}  // namespace mtsa::sql
