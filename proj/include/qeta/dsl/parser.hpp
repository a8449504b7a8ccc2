#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qeta/dsl/ast.hpp"

namespace qeta::dsl {

/// A positioned error; line and column are 1-based.
struct Diagnostic {
    int line = 1;
    int column = 1;
    std::string message;
    /// Source text of the offending token ("<end of input>" at EOF).
    std::string token;

    /// "line:col: error: message (at 'token')".
    [[nodiscard]] std::string to_string() const;
};

enum class TokenKind {
    integer,
    name,
    kw_let,
    kw_assert,
    kw_level,
    kw_eta,
    kw_to,
    kw_terms,
    kw_modular,
    kw_congruence,
    kw_base,
    kw_alpha,
    kw_upto,
    kw_orders,
    kw_u,
    lparen,
    rparen,
    lbracket,
    rbracket,
    star,
    slash,
    caret,
    at,
    assign,
    equal_equal,
    comma,
    minus,
    end,
    invalid,
};

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    SourcePos pos;
};

std::string describe(TokenKind kind);

/// Splits source text into tokens; the last token is always TokenKind::end.
/// Unrecognized characters become TokenKind::invalid tokens.
std::vector<Token> tokenize(std::string_view source);

/// Parse a whole job file. Stops at the first syntax error.
std::variant<Program, Diagnostic> parse_program(std::string_view source);

} // namespace qeta::dsl
