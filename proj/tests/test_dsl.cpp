#include <doctest.h>

#include <random>

#include "qeta/dsl/executor.hpp"
#include "qeta/dsl/parser.hpp"
#include "support.hpp"

using namespace qeta;
using namespace qeta::dsl;
using qeta::testing::rng;

namespace {

Program parse_ok(std::string_view src)
{
    auto r = parse_program(src);
    if (const auto* d = std::get_if<Diagnostic>(&r)) {
        FAIL("unexpected diagnostic: " << d->to_string());
    }
    return std::get<Program>(std::move(r));
}

Diagnostic parse_err(std::string_view src)
{
    auto r = parse_program(src);
    REQUIRE(std::holds_alternative<Diagnostic>(r));
    return std::get<Diagnostic>(r);
}

constexpr const char* job = R"(
let F = eta(9z)*eta(18z)/(eta(1z)*eta(2z)) @ level 18
let A = eta(3z)^4*eta(6z)^4/(eta(1z)^4*eta(2z)^4) @ level 6   # Hauptmodul
assert modular(F)
assert orders(A) == [-1,-1,1,1]
assert U3(F) == 3*A to 200 terms
)";

} // namespace

TEST_CASE("tokenizer")
{
    const auto t = tokenize("U3(F) == 3 # comment\n  @");
    std::vector<TokenKind> kinds;
    for (const auto& tok : t) {
        kinds.push_back(tok.kind);
    }
    CHECK(kinds == std::vector<TokenKind>{TokenKind::kw_u, TokenKind::integer, TokenKind::lparen, TokenKind::name,
                                          TokenKind::rparen, TokenKind::equal_equal, TokenKind::integer,
                                          TokenKind::at, TokenKind::end});
    CHECK(t[1].text == "3");
    CHECK(t[1].pos.column == 2);
    CHECK(t[7].pos.line == 2);
    CHECK(t[7].pos.column == 3);
    CHECK(tokenize("Ux")[0].kind == TokenKind::name);
    CHECK(tokenize("U")[0].kind == TokenKind::kw_u);
    CHECK(tokenize("\xce\xb7")[0].kind == TokenKind::invalid);
    CHECK(tokenize("\xce\xb7")[0].text.size() == 2);
}

TEST_CASE("grammar instances")
{
    auto p = parse_ok("let F = eta(9z)*eta(18z)/(eta(1z)*eta(2z)) @ level 18");
    REQUIRE(p.statements.size() == 1);
    const auto& let = std::get<LetStmt>(p.statements[0]);
    CHECK(let.name == "F");
    CHECK(let.level == 18);
    CHECK(let.expr.kind == Expr::Kind::binary);
    CHECK(let.expr.op == '/');

    p = parse_ok("assert U3(F) == 3*A to 200 terms");
    const auto& id = std::get<IdentityAssert>(std::get<AssertStmt>(p.statements[0]).assertion);
    CHECK(id.terms == 200);
    CHECK(id.lhs.kind == Expr::Kind::u_op);
    CHECK(id.lhs.value == 3);
    CHECK(print_expr(id.rhs) == "3 * A");

    p = parse_ok("assert congruence C base 3 alpha 2 upto 100\nassert orders(A) == [-1/2, 3, 0]");
    const auto& c = std::get<CongruenceAssert>(std::get<AssertStmt>(p.statements[0]).assertion);
    CHECK(c.alpha == 2);
    const auto& o = std::get<OrdersAssert>(std::get<AssertStmt>(p.statements[1]).assertion);
    CHECK(o.expected == std::vector<mpq_class>{mpq_class(-1, 2), 3, 0});

    CHECK(parse_ok("").statements.empty());
    CHECK(parse_ok("# only a comment").statements.empty());
    CHECK(parse_ok("let X = eta(1z)^-2 @ level 1").statements.size() == 1);
}

TEST_CASE("diagnostics")
{
    auto d = parse_err("let F = eta(9z * @");
    CHECK(d.line == 1);
    CHECK(d.column == 16);
    CHECK(d.token == "*");

    d = parse_err("let F = eta(z) @ level 6");
    CHECK(d.column == 13);
    CHECK(d.token == "z");

    d = parse_err("assert modular(F)\nassert U3(F) == A to terms");
    CHECK(d.line == 2);
    CHECK(d.column == 22);

    d = parse_err("let F = eta(1z)");
    CHECK(d.token == "<end of input>");

    d = parse_err("let F = eta(1z) @ level 0");
    CHECK(d.message.find("positive") != std::string::npos);

    d = parse_err("let F = 1 $ 2");
    CHECK(d.token == "$");
    CHECK(d.to_string() == "1:11: error: unexpected character (at '$')");

    d = parse_err("assert orders(A) == [1/0]");
    CHECK(d.message == "zero denominator");

    d = parse_err("let x = 99999999999999999999 @ level 1");
    CHECK(d.message.find("range") != std::string::npos);

    d = parse_err("assert U1(F) == F to 3 terms");
    CHECK(d.column == 9);
}

namespace {

std::string random_name()
{
    static const char* names[] = {"F", "A", "G", "x1", "Big_name", "q"};
    return names[rng()() % 6];
}

Expr random_expr(int depth)
{
    const auto pick = rng()() % (depth > 0 ? 6 : 3);
    switch (pick) {
    case 0:
        return Expr::eta(1 + static_cast<std::int64_t>(rng()() % 36));
    case 1:
        return Expr::reference(random_name());
    case 2:
        return Expr::integer(static_cast<std::int64_t>(rng()() % 1000));
    case 3:
        return Expr::binary(rng()() % 2 ? '*' : '/', random_expr(depth - 1), random_expr(depth - 1));
    case 4:
        return Expr::power(random_expr(depth - 1), static_cast<std::int64_t>(rng()() % 13) - 6);
    default:
        return Expr::u_op(2 + static_cast<std::int64_t>(rng()() % 5), random_expr(depth - 1));
    }
}

Program random_program()
{
    Program p;
    const auto n = rng()() % 8;
    for (std::size_t i = 0; i < n; ++i) {
        switch (rng()() % 5) {
        case 0:
            p.statements.emplace_back(LetStmt{random_name(), random_expr(4), 1 + static_cast<std::int64_t>(rng()() % 72), {}});
            break;
        case 1:
            p.statements.emplace_back(AssertStmt{ModularAssert{random_name()}, {}});
            break;
        case 2:
            p.statements.emplace_back(
                AssertStmt{IdentityAssert{random_expr(3), random_expr(3), static_cast<std::int64_t>(rng()() % 500)}, {}});
            break;
        case 3:
            p.statements.emplace_back(AssertStmt{CongruenceAssert{random_name(), 3, 1 + static_cast<std::int64_t>(rng()() % 4), 1000}, {}});
            break;
        default: {
            OrdersAssert o{random_name(), {}};
            const auto k = 1 + rng()() % 6;
            for (std::size_t j = 0; j < k; ++j) {
                o.expected.emplace_back(static_cast<long>(rng()() % 21) - 10, static_cast<unsigned long>(1 + rng()() % 6));
                o.expected.back().canonicalize();
            }
            p.statements.emplace_back(AssertStmt{std::move(o), {}});
            break;
        }
        }
    }
    return p;
}

} // namespace

TEST_CASE("print then parse is the identity on random programs")
{
    for (int trial = 0; trial < 300; ++trial) {
        const Program p = random_program();
        const std::string text = print_program(p);
        auto back = parse_program(text);
        REQUIRE_MESSAGE(std::holds_alternative<Program>(back), text);
        CHECK_MESSAGE(same_structure(p, std::get<Program>(back)), text);
        CHECK(print_program(std::get<Program>(back)) == text);
    }
    const Program j = parse_ok(job);
    CHECK(same_structure(j, parse_ok(print_program(j))));
}

TEST_CASE("malformed inputs always yield a positioned diagnostic")
{
    std::vector<std::string> corpus{print_program(parse_ok(job))};
    for (int i = 0; i < 20; ++i) {
        corpus.push_back(print_program(random_program()));
    }
    const std::string alphabet = "letassert()[]*/^@=,-#0123456789zUFA \n\t\x01\xff";
    std::uniform_int_distribution<int> op(0, 2);
    int diagnostics = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        std::string s = corpus[static_cast<std::size_t>(trial) % corpus.size()];
        const int edits = 1 + trial % 4;
        for (int e = 0; e < edits; ++e) {
            const std::size_t at = s.empty() ? 0 : rng()() % (s.size() + 1);
            const char c = alphabet[rng()() % alphabet.size()];
            switch (op(rng())) {
            case 0:
                s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), c);
                break;
            case 1:
                if (at < s.size()) {
                    s.erase(at, 1);
                }
                break;
            default:
                if (at < s.size()) {
                    s[at] = c;
                }
                break;
            }
        }
        const auto r = parse_program(s);
        if (const auto* d = std::get_if<Diagnostic>(&r)) {
            ++diagnostics;
            CHECK(d->line >= 1);
            CHECK(d->column >= 1);
            int lines = 1;
            for (char ch : s) {
                lines += ch == '\n';
            }
            CHECK(d->line <= lines);
            CHECK_FALSE(d->message.empty());
        }
    }
    CHECK(diagnostics > 1000);
}

TEST_CASE("executing the F/A job")
{
    const auto reports = execute_program(parse_ok(job));
    REQUIRE(reports.size() == 3);
    for (const auto& r : reports) {
        CHECK_MESSAGE(r.passed(), r.task);
    }
    CHECK(reports[0].task == "modular(F)");
    REQUIRE(reports[0].tables.size() == 1);
    CHECK(reports[0].tables[0].rows.size() == 4);
    CHECK(reports[2].checked == 200);
}

TEST_CASE("execution failures and errors do not stop the run")
{
    const auto reports = execute_program(parse_ok(R"(
let F = eta(9z)*eta(18z)/(eta(1z)*eta(2z)) @ level 18
let A = eta(3z)^4*eta(6z)^4/(eta(1z)^4*eta(2z)^4) @ level 6
assert U3(F) == 4*A to 50 terms
assert U3(F) == 3*B to 50 terms
assert F == A to 5 terms
let H = eta(4z) @ level 6
let A2 = A @ level 18
assert modular(A2)
assert orders(F) == [-1, -1, 0, 0, 1, 2]
let E = eta(1z)/eta(2z) @ level 2
assert modular(E)
assert F / F == 1 to 10 terms
assert U3(F) * A == 3 * A^2 to 20 terms
)"));
    REQUIRE(reports.size() == 9);
    CHECK(reports[0].status == Status::fail);
    CHECK(reports[0].first_violation->index == 1);
    CHECK(reports[1].status == Status::error);
    CHECK(reports[1].notes.back().find("unbound name 'B'") != std::string::npos);
    CHECK(reports[2].status == Status::error);
    CHECK(reports[2].notes.back().find("level mismatch") != std::string::npos);
    CHECK(reports[3].status == Status::error);
    CHECK(reports[3].task == "let H");
    CHECK(reports[4].passed());
    CHECK(reports[5].status == Status::fail);
    CHECK(reports[5].first_violation->index == 5);
    CHECK(reports[6].status == Status::fail);
    CHECK(reports[7].passed());
    CHECK(reports[8].passed());
}

TEST_CASE("congruence assertions use the bare product")
{
    const auto reports = execute_program(parse_ok(R"(
let C = eta(1z)^-1*eta(2z)^-1 @ level 2
let P = eta(1z)^-1 @ level 1
assert congruence C base 3 alpha 2 upto 2000
assert congruence P base 5 alpha 2 upto 2000
assert congruence P base 5 alpha 1 upto 2000
assert congruence C base 5 alpha 1 upto 100
assert congruence C base 7 alpha 1 upto 100
)"));
    REQUIRE(reports.size() == 5);
    CHECK(reports[0].passed());
    CHECK(reports[1].passed());
    CHECK(reports[2].passed());
    CHECK(reports[2].checked == 400);
    CHECK(reports[3].status == Status::fail);
    CHECK(reports[4].status == Status::error);
}
