#include <cctype>
#include <map>

#include "qeta/dsl/parser.hpp"

namespace qeta::dsl {

std::string describe(TokenKind kind)
{
    switch (kind) {
    case TokenKind::integer:
        return "integer";
    case TokenKind::name:
        return "name";
    case TokenKind::kw_let:
        return "'let'";
    case TokenKind::kw_assert:
        return "'assert'";
    case TokenKind::kw_level:
        return "'level'";
    case TokenKind::kw_eta:
        return "'eta'";
    case TokenKind::kw_to:
        return "'to'";
    case TokenKind::kw_terms:
        return "'terms'";
    case TokenKind::kw_modular:
        return "'modular'";
    case TokenKind::kw_congruence:
        return "'congruence'";
    case TokenKind::kw_base:
        return "'base'";
    case TokenKind::kw_alpha:
        return "'alpha'";
    case TokenKind::kw_upto:
        return "'upto'";
    case TokenKind::kw_orders:
        return "'orders'";
    case TokenKind::kw_u:
        return "'U'";
    case TokenKind::lparen:
        return "'('";
    case TokenKind::rparen:
        return "')'";
    case TokenKind::lbracket:
        return "'['";
    case TokenKind::rbracket:
        return "']'";
    case TokenKind::star:
        return "'*'";
    case TokenKind::slash:
        return "'/'";
    case TokenKind::caret:
        return "'^'";
    case TokenKind::at:
        return "'@'";
    case TokenKind::assign:
        return "'='";
    case TokenKind::equal_equal:
        return "'=='";
    case TokenKind::comma:
        return "','";
    case TokenKind::minus:
        return "'-'";
    case TokenKind::end:
        return "end of input";
    case TokenKind::invalid:
        return "invalid character";
    }
    return "token";
}

namespace {

const std::map<std::string, TokenKind, std::less<>>& keywords()
{
    static const std::map<std::string, TokenKind, std::less<>> table{
        {"let", TokenKind::kw_let},         {"assert", TokenKind::kw_assert},
        {"level", TokenKind::kw_level},     {"eta", TokenKind::kw_eta},
        {"to", TokenKind::kw_to},           {"terms", TokenKind::kw_terms},
        {"modular", TokenKind::kw_modular}, {"congruence", TokenKind::kw_congruence},
        {"base", TokenKind::kw_base},       {"alpha", TokenKind::kw_alpha},
        {"upto", TokenKind::kw_upto},       {"orders", TokenKind::kw_orders},
        {"U", TokenKind::kw_u},
    };
    return table;
}

bool is_name_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_name_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_digit(char c)
{
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
}

} // namespace

std::vector<Token> tokenize(std::string_view source)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    int line = 1;
    int column = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < source.size(); ++k, ++i) {
            if (source[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    auto push = [&](TokenKind kind, std::size_t length) {
        tokens.push_back({kind, std::string(source.substr(i, length)), {line, column}});
        advance(length);
    };

    while (i < source.size()) {
        const char c = source[i];
        if (c == '#') {
            while (i < source.size() && source[i] != '\n') {
                advance(1);
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            advance(1);
            continue;
        }
        if (is_digit(c)) {
            std::size_t n = 0;
            while (i + n < source.size() && is_digit(source[i + n])) {
                ++n;
            }
            push(TokenKind::integer, n);
            continue;
        }
        if (is_name_start(c)) {
            std::size_t n = 0;
            while (i + n < source.size() && is_name_char(source[i + n])) {
                ++n;
            }
            const std::string_view word = source.substr(i, n);
            // "U3" is the operator U followed by the prime 3.
            if (word.size() > 1 && word[0] == 'U'
                && word.find_first_not_of("0123456789", 1) == std::string_view::npos) {
                push(TokenKind::kw_u, 1);
                push(TokenKind::integer, n - 1);
                continue;
            }
            const auto it = keywords().find(word);
            push(it == keywords().end() ? TokenKind::name : it->second, n);
            continue;
        }
        switch (c) {
        case '(':
            push(TokenKind::lparen, 1);
            break;
        case ')':
            push(TokenKind::rparen, 1);
            break;
        case '[':
            push(TokenKind::lbracket, 1);
            break;
        case ']':
            push(TokenKind::rbracket, 1);
            break;
        case '*':
            push(TokenKind::star, 1);
            break;
        case '/':
            push(TokenKind::slash, 1);
            break;
        case '^':
            push(TokenKind::caret, 1);
            break;
        case '@':
            push(TokenKind::at, 1);
            break;
        case ',':
            push(TokenKind::comma, 1);
            break;
        case '-':
            push(TokenKind::minus, 1);
            break;
        case '=':
            if (i + 1 < source.size() && source[i + 1] == '=') {
                push(TokenKind::equal_equal, 2);
            } else {
                push(TokenKind::assign, 1);
            }
            break;
        default: {
            // Keep multi-byte UTF-8 sequences together in the diagnostic.
            std::size_t n = 1;
            while (i + n < source.size() && (static_cast<unsigned char>(source[i + n]) & 0xC0) == 0x80) {
                ++n;
            }
            push(TokenKind::invalid, n);
            break;
        }
        }
    }
    tokens.push_back({TokenKind::end, "", {line, column}});
    return tokens;
}

} // namespace qeta::dsl
