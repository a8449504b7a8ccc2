#pragma once

// Syntax tree for .qeta job files.
//
//   program   := stmt*
//   stmt      := "let" NAME "=" expr "@" "level" INT
//              | "assert" assertion
//   expr      := term (("*" | "/") term)*
//   term      := base ("^" ["-"] INT)?
//   base      := "eta" "(" INT "z" ")" | NAME | INT | "(" expr ")" | "U" INT "(" expr ")"
//   assertion := "modular" "(" NAME ")"
//              | expr "==" expr "to" INT "terms"
//              | "congruence" NAME "base" INT "alpha" INT "upto" INT
//              | "orders" "(" NAME ")" "==" "[" rational ("," rational)* "]"
//   rational  := ["-"] INT ["/" INT]
//
// "#" starts a comment that runs to the end of the line.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace qeta::dsl {

struct SourcePos {
    int line = 1;
    int column = 1;
};

struct Expr {
    enum class Kind { eta, name, integer, binary, power, u_op };

    Kind kind = Kind::integer;
    SourcePos pos;
    /// delta for eta, the value for integer, the exponent for power, p for u_op.
    std::int64_t value = 0;
    /// Bound name for Kind::name.
    std::string name;
    /// '*' or '/' for Kind::binary.
    char op = '*';
    /// binary: {lhs, rhs}; power and u_op: {operand}.
    std::vector<Expr> children;

    static Expr eta(std::int64_t delta, SourcePos pos = {});
    static Expr reference(std::string name, SourcePos pos = {});
    static Expr integer(std::int64_t v, SourcePos pos = {});
    static Expr binary(char op, Expr lhs, Expr rhs, SourcePos pos = {});
    static Expr power(Expr base, std::int64_t exponent, SourcePos pos = {});
    static Expr u_op(std::int64_t p, Expr operand, SourcePos pos = {});
};

/// Structural equality, ignoring source positions.
bool same_structure(const Expr& a, const Expr& b);

struct LetStmt {
    std::string name;
    Expr expr;
    std::int64_t level = 1;
    SourcePos pos;
};

struct ModularAssert {
    std::string name;
};

struct IdentityAssert {
    Expr lhs;
    Expr rhs;
    std::int64_t terms = 0;
};

struct CongruenceAssert {
    std::string name;
    std::int64_t base = 3;
    std::int64_t alpha = 1;
    std::int64_t upto = 0;
};

struct OrdersAssert {
    std::string name;
    std::vector<mpq_class> expected;
};

using Assertion = std::variant<ModularAssert, IdentityAssert, CongruenceAssert, OrdersAssert>;

struct AssertStmt {
    Assertion assertion;
    SourcePos pos;
};

using Statement = std::variant<LetStmt, AssertStmt>;

struct Program {
    std::vector<Statement> statements;
};

bool same_structure(const Program& a, const Program& b);

/// Canonical source text; parse_program(print_program(p)) is structurally p.
std::string print_expr(const Expr& e);
std::string print_program(const Program& p);

} // namespace qeta::dsl
