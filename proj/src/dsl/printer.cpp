#include <sstream>

#include "qeta/dsl/ast.hpp"

namespace qeta::dsl {

Expr Expr::eta(std::int64_t delta, SourcePos pos)
{
    Expr e;
    e.kind = Kind::eta;
    e.value = delta;
    e.pos = pos;
    return e;
}

Expr Expr::reference(std::string name, SourcePos pos)
{
    Expr e;
    e.kind = Kind::name;
    e.name = std::move(name);
    e.pos = pos;
    return e;
}

Expr Expr::integer(std::int64_t v, SourcePos pos)
{
    Expr e;
    e.kind = Kind::integer;
    e.value = v;
    e.pos = pos;
    return e;
}

Expr Expr::binary(char op, Expr lhs, Expr rhs, SourcePos pos)
{
    Expr e;
    e.kind = Kind::binary;
    e.op = op;
    e.pos = pos;
    e.children.push_back(std::move(lhs));
    e.children.push_back(std::move(rhs));
    return e;
}

Expr Expr::power(Expr base, std::int64_t exponent, SourcePos pos)
{
    Expr e;
    e.kind = Kind::power;
    e.value = exponent;
    e.pos = pos;
    e.children.push_back(std::move(base));
    return e;
}

Expr Expr::u_op(std::int64_t p, Expr operand, SourcePos pos)
{
    Expr e;
    e.kind = Kind::u_op;
    e.value = p;
    e.pos = pos;
    e.children.push_back(std::move(operand));
    return e;
}

bool same_structure(const Expr& a, const Expr& b)
{
    if (a.kind != b.kind || a.children.size() != b.children.size()) {
        return false;
    }
    switch (a.kind) {
    case Expr::Kind::name:
        if (a.name != b.name) {
            return false;
        }
        break;
    case Expr::Kind::binary:
        if (a.op != b.op) {
            return false;
        }
        break;
    default:
        if (a.value != b.value) {
            return false;
        }
        break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!same_structure(a.children[i], b.children[i])) {
            return false;
        }
    }
    return true;
}

namespace {

bool same_assertion(const Assertion& a, const Assertion& b)
{
    if (a.index() != b.index()) {
        return false;
    }
    if (const auto* m = std::get_if<ModularAssert>(&a)) {
        return m->name == std::get<ModularAssert>(b).name;
    }
    if (const auto* id = std::get_if<IdentityAssert>(&a)) {
        const auto& other = std::get<IdentityAssert>(b);
        return id->terms == other.terms && same_structure(id->lhs, other.lhs) && same_structure(id->rhs, other.rhs);
    }
    if (const auto* c = std::get_if<CongruenceAssert>(&a)) {
        const auto& other = std::get<CongruenceAssert>(b);
        return c->name == other.name && c->base == other.base && c->alpha == other.alpha && c->upto == other.upto;
    }
    const auto& o = std::get<OrdersAssert>(a);
    const auto& other = std::get<OrdersAssert>(b);
    return o.name == other.name && o.expected == other.expected;
}

// Operator precedence: binary 1, power 2, atoms 3.
int precedence(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::binary:
        return 1;
    case Expr::Kind::power:
        return 2;
    default:
        return 3;
    }
}

void print(std::ostream& out, const Expr& e);

void print_wrapped(std::ostream& out, const Expr& e, int min_precedence)
{
    if (precedence(e) < min_precedence) {
        out << '(';
        print(out, e);
        out << ')';
    } else {
        print(out, e);
    }
}

void print(std::ostream& out, const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::eta:
        out << "eta(" << e.value << "z)";
        break;
    case Expr::Kind::name:
        out << e.name;
        break;
    case Expr::Kind::integer:
        out << e.value;
        break;
    case Expr::Kind::binary:
        // Left-associative: a parenthesized binary on the right must stay parenthesized.
        print_wrapped(out, e.children[0], 1);
        out << ' ' << e.op << ' ';
        print_wrapped(out, e.children[1], 2);
        break;
    case Expr::Kind::power:
        print_wrapped(out, e.children[0], 3);
        out << '^' << e.value;
        break;
    case Expr::Kind::u_op:
        out << 'U' << e.value << '(';
        print(out, e.children[0]);
        out << ')';
        break;
    }
}

} // namespace

bool same_structure(const Program& a, const Program& b)
{
    if (a.statements.size() != b.statements.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.statements.size(); ++i) {
        const Statement& x = a.statements[i];
        const Statement& y = b.statements[i];
        if (x.index() != y.index()) {
            return false;
        }
        if (const auto* let = std::get_if<LetStmt>(&x)) {
            const auto& other = std::get<LetStmt>(y);
            if (let->name != other.name || let->level != other.level || !same_structure(let->expr, other.expr)) {
                return false;
            }
        } else if (!same_assertion(std::get<AssertStmt>(x).assertion, std::get<AssertStmt>(y).assertion)) {
            return false;
        }
    }
    return true;
}

std::string print_expr(const Expr& e)
{
    std::ostringstream out;
    print(out, e);
    return out.str();
}

std::string print_program(const Program& p)
{
    std::ostringstream out;
    for (const Statement& s : p.statements) {
        if (const auto* let = std::get_if<LetStmt>(&s)) {
            out << "let " << let->name << " = " << print_expr(let->expr) << " @ level " << let->level << '\n';
            continue;
        }
        out << "assert ";
        const Assertion& a = std::get<AssertStmt>(s).assertion;
        if (const auto* m = std::get_if<ModularAssert>(&a)) {
            out << "modular(" << m->name << ")";
        } else if (const auto* id = std::get_if<IdentityAssert>(&a)) {
            out << print_expr(id->lhs) << " == " << print_expr(id->rhs) << " to " << id->terms << " terms";
        } else if (const auto* c = std::get_if<CongruenceAssert>(&a)) {
            out << "congruence " << c->name << " base " << c->base << " alpha " << c->alpha << " upto " << c->upto;
        } else {
            const auto& o = std::get<OrdersAssert>(a);
            out << "orders(" << o.name << ") == [";
            for (std::size_t i = 0; i < o.expected.size(); ++i) {
                out << (i ? ", " : "") << o.expected[i].get_str();
            }
            out << ']';
        }
        out << '\n';
    }
    return out.str();
}

} // namespace qeta::dsl
