#include "qeta/dsl/executor.hpp"

#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "qeta/congruence.hpp"
#include "qeta/eta_quotient.hpp"

namespace qeta::dsl {

namespace {

class ExecError : public std::runtime_error {
public:
    ExecError(SourcePos pos, const std::string& message)
        : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " + message)
    {
    }
};

/// Exact q-expansion of the unscaled body to the requested number of terms.
using SeriesThunk = std::function<TruncatedSeries(std::size_t)>;

struct Value {
    std::variant<EtaExponents, SeriesThunk> body;
    mpq_class scalar = 1;
    std::optional<std::int64_t> level;

    [[nodiscard]] bool symbolic() const { return std::holds_alternative<EtaExponents>(body); }
};

std::int64_t natural_level(const EtaExponents& exps)
{
    std::int64_t level = 1;
    for (const auto& [delta, r] : exps) {
        level = std::lcm(level, delta);
    }
    return level;
}

EtaQuotient as_quotient(const Value& v)
{
    const auto& exps = std::get<EtaExponents>(v.body);
    return {v.level.value_or(natural_level(exps)), exps};
}

mpz_class integral_scalar(const Value& v, SourcePos pos)
{
    if (v.scalar.get_den() != 1) {
        throw ExecError(pos, "scalar " + v.scalar.get_str() + " is not an integer");
    }
    return v.scalar.get_num();
}

TruncatedSeries body_series(const Value& v, std::size_t terms)
{
    if (const auto* thunk = std::get_if<SeriesThunk>(&v.body)) {
        return (*thunk)(terms);
    }
    const auto& exps = std::get<EtaExponents>(v.body);
    if (exps.empty()) {
        return TruncatedSeries::one(terms);
    }
    return q_expansion(as_quotient(v), terms);
}

TruncatedSeries materialize(const Value& v, std::size_t terms, SourcePos pos)
{
    const mpz_class c = integral_scalar(v, pos);
    try {
        TruncatedSeries s = body_series(v, terms);
        return c == 1 ? s : s.scaled(c);
    } catch (const std::exception& e) {
        throw ExecError(pos, e.what());
    }
}

std::optional<std::int64_t> merged_level(const Value& a, const Value& b, SourcePos pos)
{
    if (a.level && b.level && *a.level != *b.level) {
        throw ExecError(pos, "level mismatch: " + std::to_string(*a.level) + " vs " + std::to_string(*b.level));
    }
    return a.level ? a.level : b.level;
}

SeriesThunk as_thunk(Value v)
{
    v.scalar = 1;
    return [v](std::size_t terms) { return body_series(v, terms); };
}

TruncatedSeries invert_unit(const TruncatedSeries& s, SourcePos pos)
{
    try {
        return ring_invert(s);
    } catch (const NonUnitError&) {
        throw ExecError(pos, "cannot divide by a series whose constant term is not +-1");
    }
}

class Executor {
public:
    explicit Executor(std::size_t precision) : precision_(precision) {}

    std::vector<VerificationReport> run(const Program& program)
    {
        std::vector<VerificationReport> reports;
        for (const Statement& s : program.statements) {
            if (const auto* let = std::get_if<LetStmt>(&s)) {
                try {
                    bind(*let);
                } catch (const std::exception& e) {
                    VerificationReport r;
                    r.task = "let " + let->name;
                    r.record_error(e.what());
                    reports.push_back(std::move(r));
                }
                continue;
            }
            const auto& a = std::get<AssertStmt>(s);
            reports.push_back(check(a));
        }
        return reports;
    }

private:
    std::size_t precision_;
    std::map<std::string, Value, std::less<>> bindings_;

    const Value& lookup(const std::string& name, SourcePos pos) const
    {
        const auto it = bindings_.find(name);
        if (it == bindings_.end()) {
            throw ExecError(pos, "unbound name '" + name + "'");
        }
        return it->second;
    }

    void bind(const LetStmt& let)
    {
        Value v = eval(let.expr);
        if (v.level && let.level % *v.level != 0) {
            throw ExecError(let.pos, "expression has level " + std::to_string(*v.level) + ", which does not divide "
                                         + std::to_string(let.level));
        }
        v.level = let.level;
        if (v.symbolic()) {
            try {
                (void)as_quotient(v);
            } catch (const LevelError& e) {
                throw ExecError(let.pos, e.what());
            }
        }
        bindings_.insert_or_assign(let.name, std::move(v));
    }

    Value eval(const Expr& e) const
    {
        switch (e.kind) {
        case Expr::Kind::eta:
            return {EtaExponents{{e.value, 1}}, 1, std::nullopt};
        case Expr::Kind::integer:
            return {EtaExponents{}, mpq_class(mpz_class(static_cast<long>(e.value))), std::nullopt};
        case Expr::Kind::name:
            return lookup(e.name, e.pos);
        case Expr::Kind::binary:
            return combine(e.op, eval(e.children[0]), eval(e.children[1]), e.pos);
        case Expr::Kind::power:
            return raise(eval(e.children[0]), e.value, e.pos);
        case Expr::Kind::u_op:
            return apply_u(static_cast<std::uint64_t>(e.value), eval(e.children[0]), e.pos);
        }
        throw ExecError(e.pos, "unknown expression");
    }

    static Value combine(char op, const Value& a, const Value& b, SourcePos pos)
    {
        Value out;
        out.level = merged_level(a, b, pos);
        if (op == '/' && b.scalar == 0) {
            throw ExecError(pos, "division by zero");
        }
        out.scalar = op == '*' ? mpq_class(a.scalar * b.scalar) : mpq_class(a.scalar / b.scalar);
        if (a.symbolic() && b.symbolic()) {
            EtaExponents exps = std::get<EtaExponents>(a.body);
            for (const auto& [delta, r] : std::get<EtaExponents>(b.body)) {
                exps[delta] += op == '*' ? r : -r;
                if (exps[delta] == 0) {
                    exps.erase(delta);
                }
            }
            out.body = std::move(exps);
            return out;
        }
        Value lhs = a;
        Value rhs = b;
        lhs.level = rhs.level = out.level;
        SeriesThunk f = as_thunk(lhs);
        SeriesThunk g = as_thunk(rhs);
        if (op == '*') {
            out.body = SeriesThunk([f, g](std::size_t n) { return ring_mul(f(n), g(n)); });
        } else {
            out.body = SeriesThunk([f, g, pos](std::size_t n) { return ring_mul(f(n), invert_unit(g(n), pos)); });
        }
        return out;
    }

    static Value raise(const Value& base, std::int64_t k, SourcePos pos)
    {
        Value out;
        out.level = base.level;
        if (k < 0 && base.scalar == 0) {
            throw ExecError(pos, "division by zero");
        }
        mpz_class num;
        mpz_class den;
        const unsigned long mag = static_cast<unsigned long>(k < 0 ? -k : k);
        mpz_pow_ui(num.get_mpz_t(), base.scalar.get_num_mpz_t(), mag);
        mpz_pow_ui(den.get_mpz_t(), base.scalar.get_den_mpz_t(), mag);
        out.scalar = k < 0 ? mpq_class(den, num) : mpq_class(num, den);
        out.scalar.canonicalize();
        if (base.symbolic()) {
            EtaExponents exps;
            for (const auto& [delta, r] : std::get<EtaExponents>(base.body)) {
                if (k != 0) {
                    exps[delta] = r * k;
                }
            }
            out.body = std::move(exps);
            return out;
        }
        SeriesThunk f = as_thunk(base);
        out.body = SeriesThunk([f, k, mag, pos](std::size_t n) {
            TruncatedSeries s = f(n);
            if (k < 0) {
                s = invert_unit(s, pos);
            }
            return ring_pow(s, mag);
        });
        return out;
    }

    static Value apply_u(std::uint64_t p, const Value& operand, SourcePos pos)
    {
        Value out;
        out.scalar = operand.scalar;
        if (operand.level) {
            const auto sp = static_cast<std::int64_t>(p);
            out.level = *operand.level % (sp * sp) == 0 ? *operand.level / sp : *operand.level;
        }
        SeriesThunk f = as_thunk(operand);
        out.body = SeriesThunk([f, p, pos](std::size_t n) {
            try {
                return u_p(f(p * n), p);
            } catch (const ExecError&) {
                throw;
            } catch (const std::exception& e) {
                throw ExecError(pos, e.what());
            }
        });
        return out;
    }

    const Value& symbolic_binding(const std::string& name, SourcePos pos, const char* what) const
    {
        const Value& v = lookup(name, pos);
        if (!v.symbolic()) {
            throw ExecError(pos, std::string(what) + " needs an eta quotient, but '" + name + "' is a series");
        }
        return v;
    }

    VerificationReport check(const AssertStmt& stmt) const
    {
        VerificationReport r;
        r.task = task_name(stmt.assertion);
        try {
            std::visit([&](const auto& a) { run_assertion(a, stmt.pos, r); }, stmt.assertion);
        } catch (const std::exception& e) {
            r.tables.clear();
            r.first_violation.reset();
            r.record_error(e.what());
        }
        return r;
    }

    static std::string task_name(const Assertion& a)
    {
        Program p;
        p.statements.emplace_back(AssertStmt{a, {}});
        std::string text = print_program(p);
        text = text.substr(std::string("assert ").size());
        if (!text.empty() && text.back() == '\n') {
            text.pop_back();
        }
        return text;
    }

    void run_assertion(const ModularAssert& a, SourcePos pos, VerificationReport& r) const
    {
        const EtaQuotient eq = as_quotient(symbolic_binding(a.name, pos, "modular()"));
        const CertResult cert = certify_modular(eq);
        ReportTable table{"conditions", {"condition", "holds", "detail"}, {}};
        for (const auto& c : cert.conditions) {
            table.rows.push_back({c.name, c.holds ? "true" : "false", c.detail});
        }
        r.tables.push_back(std::move(table));
        r.notes.push_back(eq.to_string() + ", prod delta^r = " + cert.delta_product.get_str());
        r.checked = cert.conditions.size();
        for (std::size_t i = 0; i < cert.conditions.size(); ++i) {
            if (!cert.conditions[i].holds) {
                r.record_violation(i, cert.conditions[i].name);
            }
        }
    }

    void run_assertion(const IdentityAssert& a, SourcePos pos, VerificationReport& r) const
    {
        if (a.terms < 1) {
            throw ExecError(pos, "term count must be positive");
        }
        const Value lhs = eval(a.lhs);
        const Value rhs = eval(a.rhs);
        (void)merged_level(lhs, rhs, pos);
        const auto n = static_cast<std::size_t>(a.terms);
        const TruncatedSeries x = materialize(lhs, n, pos);
        const TruncatedSeries y = materialize(rhs, n, pos);
        r.checked = n;
        for (std::size_t k = 0; k < n; ++k) {
            const mpz_class u = x.coefficient(k);
            const mpz_class v = y.coefficient(k);
            if (u != v) {
                r.record_violation(k, u.get_str() + " != " + v.get_str());
                break;
            }
        }
    }

    void run_assertion(const CongruenceAssert& a, SourcePos pos, VerificationReport& r) const
    {
        if (a.alpha < 1 || a.upto < 0) {
            throw ExecError(pos, "alpha must be positive and upto non-negative");
        }
        CongruenceFamily family;
        if (a.base == 3) {
            family = CongruenceFamily::cubic(static_cast<unsigned>(a.alpha));
        } else if (a.base == 5) {
            family = CongruenceFamily::watson(static_cast<unsigned>(a.alpha));
        } else {
            throw ExecError(pos, "no congruence family for base " + std::to_string(a.base) + " (use 3 or 5)");
        }
        const Value& v = lookup(a.name, pos);
        const auto terms = static_cast<std::size_t>(a.upto) + 1;
        TruncatedSeries s(1);
        if (v.symbolic()) {
            // Coefficients of the bare product, without the q-power prefactor.
            const mpz_class c = integral_scalar(v, pos);
            s = product_series(as_quotient(v), terms, family.divisor);
            if (c != 1) {
                s = s.scaled(c);
            }
        } else {
            s = reduce_mod(materialize(v, terms, pos), family.divisor);
        }
        VerificationReport inner = verify_congruence_family(s, family, static_cast<std::size_t>(a.upto));
        r.checked = inner.checked;
        r.status = inner.status;
        r.first_violation = inner.first_violation;
        r.notes = std::move(inner.notes);
        std::ostringstream note;
        note << "indices " << family.progression_modulus << "n + " << family.residue << ", divisor " << family.divisor;
        r.notes.push_back(note.str());
    }

    void run_assertion(const OrdersAssert& a, SourcePos pos, VerificationReport& r) const
    {
        const EtaQuotient eq = as_quotient(symbolic_binding(a.name, pos, "orders()"));
        const CuspOrderTable table = order_table(eq);
        ReportTable out{"orders", {"cusp", "multiplicity", "order", "expected"}, {}};
        for (std::size_t i = 0; i < table.entries.size(); ++i) {
            const auto& e = table.entries[i];
            out.rows.push_back({e.cusp.to_string(), std::to_string(e.cusp.multiplicity), e.order.get_str(),
                                i < a.expected.size() ? a.expected[i].get_str() : "-"});
        }
        r.tables.push_back(std::move(out));
        r.checked = std::max(table.entries.size(), a.expected.size());
        for (std::size_t i = 0; i < r.checked; ++i) {
            if (i >= table.entries.size() || i >= a.expected.size()) {
                r.record_violation(i, "expected " + std::to_string(a.expected.size()) + " cusps, level "
                                          + std::to_string(eq.level()) + " has "
                                          + std::to_string(table.entries.size()));
                break;
            }
            if (table.entries[i].order != a.expected[i]) {
                r.record_violation(i, table.entries[i].order.get_str());
                break;
            }
        }
        // Order at infinity against the computed q-expansion.
        const mpq_class lead = leading_exponent(eq);
        if (lead.get_den() == 1 && lead >= 0) {
            const TruncatedSeries s = q_expansion(eq, precision_);
            const SeriesValuation val = series_valuation(s);
            std::ostringstream note;
            note << "order at infinity " << table.order_at(eq.level()).get_str() << ", q-expansion valuation "
                 << (val.exponent ? std::to_string(*val.exponent) : std::string("none")) << " through "
                 << precision_ << " terms";
            r.notes.push_back(note.str());
        }
    }
};

} // namespace

std::vector<VerificationReport> execute_program(const Program& program, std::size_t precision)
{
    return Executor(precision).run(program);
}

} // namespace qeta::dsl
