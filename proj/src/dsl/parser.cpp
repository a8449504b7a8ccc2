#include <charconv>
#include <sstream>
#include <stdexcept>

#include "qeta/dsl/parser.hpp"

namespace qeta::dsl {

std::string Diagnostic::to_string() const
{
    std::ostringstream out;
    out << line << ':' << column << ": error: " << message << " (at '" << token << "')";
    return out.str();
}

namespace {

struct SyntaxError {
    Diagnostic diagnostic;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    Program program()
    {
        Program p;
        while (peek().kind != TokenKind::end) {
            p.statements.push_back(statement());
        }
        return p;
    }

private:
    std::vector<Token> tokens_;
    std::size_t at_ = 0;

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const
    {
        return tokens_[std::min(at_ + ahead, tokens_.size() - 1)];
    }

    const Token& next()
    {
        const Token& t = peek();
        if (at_ + 1 < tokens_.size()) {
            ++at_;
        }
        return t;
    }

    [[noreturn]] void fail(const Token& t, const std::string& message) const
    {
        std::string text = t.kind == TokenKind::end ? "<end of input>" : t.text;
        throw SyntaxError{{t.pos.line, t.pos.column, message, std::move(text)}};
    }

    const Token& expect(TokenKind kind, const char* context)
    {
        if (peek().kind == TokenKind::invalid) {
            fail(peek(), "unexpected character");
        }
        if (peek().kind != kind) {
            fail(peek(), "expected " + describe(kind) + " " + context + ", found " + describe(peek().kind));
        }
        return next();
    }

    std::int64_t integer(const char* context)
    {
        const Token& t = expect(TokenKind::integer, context);
        std::int64_t value = 0;
        const auto* first = t.text.data();
        const auto* last = first + t.text.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) {
            fail(t, "integer literal out of range");
        }
        return value;
    }

    Statement statement()
    {
        const Token& head = peek();
        if (head.kind == TokenKind::kw_let) {
            next();
            LetStmt let;
            let.pos = head.pos;
            let.name = expect(TokenKind::name, "after 'let'").text;
            expect(TokenKind::assign, "after binding name");
            let.expr = expr();
            expect(TokenKind::at, "before level annotation");
            expect(TokenKind::kw_level, "after '@'");
            const Token& level_token = peek();
            let.level = integer("after 'level'");
            if (let.level < 1) {
                fail(level_token, "level must be positive");
            }
            return let;
        }
        if (head.kind == TokenKind::kw_assert) {
            next();
            AssertStmt a;
            a.pos = head.pos;
            a.assertion = assertion();
            return a;
        }
        if (head.kind == TokenKind::invalid) {
            fail(head, "unexpected character");
        }
        fail(head, "expected 'let' or 'assert', found " + describe(head.kind));
    }

    Assertion assertion()
    {
        switch (peek().kind) {
        case TokenKind::kw_modular: {
            next();
            expect(TokenKind::lparen, "after 'modular'");
            ModularAssert m{expect(TokenKind::name, "in modular(...)").text};
            expect(TokenKind::rparen, "to close modular(...)");
            return m;
        }
        case TokenKind::kw_congruence: {
            next();
            CongruenceAssert c;
            c.name = expect(TokenKind::name, "after 'congruence'").text;
            expect(TokenKind::kw_base, "in congruence assertion");
            c.base = integer("after 'base'");
            expect(TokenKind::kw_alpha, "in congruence assertion");
            c.alpha = integer("after 'alpha'");
            expect(TokenKind::kw_upto, "in congruence assertion");
            c.upto = integer("after 'upto'");
            return c;
        }
        case TokenKind::kw_orders: {
            next();
            OrdersAssert o;
            expect(TokenKind::lparen, "after 'orders'");
            o.name = expect(TokenKind::name, "in orders(...)").text;
            expect(TokenKind::rparen, "to close orders(...)");
            expect(TokenKind::equal_equal, "after orders(...)");
            expect(TokenKind::lbracket, "to open the order list");
            o.expected.push_back(rational());
            while (peek().kind == TokenKind::comma) {
                next();
                o.expected.push_back(rational());
            }
            expect(TokenKind::rbracket, "to close the order list");
            return o;
        }
        default: {
            IdentityAssert id;
            id.lhs = expr();
            expect(TokenKind::equal_equal, "in identity assertion");
            id.rhs = expr();
            expect(TokenKind::kw_to, "after identity");
            id.terms = integer("after 'to'");
            expect(TokenKind::kw_terms, "after term count");
            return id;
        }
        }
    }

    mpq_class rational()
    {
        bool negative = false;
        if (peek().kind == TokenKind::minus) {
            next();
            negative = true;
        }
        mpz_class num(expect(TokenKind::integer, "in order list").text);
        mpz_class den = 1;
        if (peek().kind == TokenKind::slash) {
            next();
            const Token& t = expect(TokenKind::integer, "as denominator");
            den = mpz_class(t.text);
            if (den == 0) {
                fail(t, "zero denominator");
            }
        }
        mpq_class q(negative ? mpz_class(-num) : num, den);
        q.canonicalize();
        return q;
    }

    Expr expr()
    {
        Expr lhs = term();
        while (peek().kind == TokenKind::star || peek().kind == TokenKind::slash) {
            const Token& op = next();
            Expr rhs = term();
            lhs = Expr::binary(op.kind == TokenKind::star ? '*' : '/', std::move(lhs), std::move(rhs), op.pos);
        }
        return lhs;
    }

    Expr term()
    {
        Expr b = base();
        if (peek().kind == TokenKind::caret) {
            const Token& caret = next();
            bool negative = false;
            if (peek().kind == TokenKind::minus) {
                next();
                negative = true;
            }
            const std::int64_t e = integer("as exponent");
            b = Expr::power(std::move(b), negative ? -e : e, caret.pos);
        }
        return b;
    }

    Expr base()
    {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::kw_eta: {
            next();
            expect(TokenKind::lparen, "after 'eta'");
            const Token& delta_token = peek();
            const std::int64_t delta = integer("in eta(...)");
            if (delta < 1) {
                fail(delta_token, "eta argument must be a positive multiple of z");
            }
            const Token& z = peek();
            if (z.kind != TokenKind::name || z.text != "z") {
                if (z.kind == TokenKind::invalid) {
                    fail(z, "unexpected character");
                }
                fail(z, "expected 'z' after eta multiplier, found " + describe(z.kind));
            }
            next();
            expect(TokenKind::rparen, "to close eta(...)");
            return Expr::eta(delta, t.pos);
        }
        case TokenKind::name:
            next();
            return Expr::reference(t.text, t.pos);
        case TokenKind::integer:
            return Expr::integer(integer("literal"), t.pos);
        case TokenKind::lparen: {
            next();
            Expr inner = expr();
            expect(TokenKind::rparen, "to close parenthesis");
            return inner;
        }
        case TokenKind::kw_u: {
            next();
            const Token& p_token = peek();
            const std::int64_t p = integer("after 'U'");
            if (p < 2) {
                fail(p_token, "U operator index must be at least 2");
            }
            expect(TokenKind::lparen, "after U operator");
            Expr operand = expr();
            expect(TokenKind::rparen, "to close U(...)");
            return Expr::u_op(p, std::move(operand), t.pos);
        }
        case TokenKind::invalid:
            fail(t, "unexpected character");
        default:
            fail(t, "expected expression, found " + describe(t.kind));
        }
    }
};

} // namespace

std::variant<Program, Diagnostic> parse_program(std::string_view source)
{
    try {
        Parser parser(tokenize(source));
        return parser.program();
    } catch (const SyntaxError& e) {
        return e.diagnostic;
    }
}

} // namespace qeta::dsl
