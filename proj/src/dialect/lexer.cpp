#include "mtsa/dialect/lexer.hpp"

#include <cctype>

namespace mtsa::sql {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    int line = 1;
    int col = 1;
    std::size_t i = 0;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        int tokLine = line;
        int tokCol = col;
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            tokens.push_back({TokenKind::Identifier, std::string(text.substr(i, j - i)),
                              tokLine, tokCol});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            std::size_t j = i;
            bool dot = false;
            while (j < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[j])) ||
                    (!dot && text[j] == '.' && j + 1 < text.size() &&
                     std::isdigit(static_cast<unsigned char>(text[j + 1]))))) {
                if (text[j] == '.') dot = true;
                ++j;
            }
            tokens.push_back({TokenKind::Number, std::string(text.substr(i, j - i)), tokLine,
                              tokCol});
            advance(j - i);
            continue;
        }
        if (c == '\'') {
            std::string value;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < text.size()) {
                if (text[j] == '\n') break;
                if (text[j] == '\'') {
                    if (j + 1 < text.size() && text[j + 1] == '\'') {
                        value += '\'';
                        j += 2;
                        continue;
                    }
                    closed = true;
                    ++j;
                    break;
                }
                value += text[j];
                ++j;
            }
            if (!closed) throw LexError(tokLine, tokCol, "unterminated string literal");
            tokens.push_back({TokenKind::String, value, tokLine, tokCol});
            advance(j - i);
            continue;
        }
        if (c == '<' || c == '>') {
            if (i + 1 < text.size() && text[i + 1] == '=') {
                tokens.push_back({TokenKind::Symbol, std::string(1, c) + "=", tokLine, tokCol});
                advance(2);
                continue;
            }
            tokens.push_back({TokenKind::Symbol, std::string(1, c), tokLine, tokCol});
            advance(1);
            continue;
        }
        if (c == '(' || c == ')' || c == ',' || c == ';' || c == '.' || c == '=' ||
            c == '*' || c == '+' || c == '-') {
            tokens.push_back({TokenKind::Symbol, std::string(1, c), tokLine, tokCol});
            advance(1);
            continue;
        }
        throw LexError(tokLine, tokCol, std::string("illegal character '") + c + "'");
    }
    tokens.push_back({TokenKind::End, "", line, col});
    return tokens;
}

}  // namespace mtsa::sql
