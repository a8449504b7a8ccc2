// Acceptance gate: one PASS/FAIL line per criterion.
//
//   qeta_acceptance [--expect-fail N]...
//
// Exit status is 0 when every criterion passes, except those named with
// --expect-fail, which are still printed (and still FAIL) but do not affect
// the status. An expected failure that unexpectedly passes is reported too.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qeta/arith.hpp"
#include "qeta/congruence.hpp"
#include "qeta/eta_quotient.hpp"
#include "qeta/hauptmodul.hpp"
#include "support.hpp"

using namespace qeta;

namespace {

// Wall-clock limits in seconds.
constexpr double limit_u_of_f = 5.0;
constexpr double limit_theorem11 = 10.0;
constexpr double limit_theorem12 = 120.0;
constexpr double limit_watson = 60.0;
constexpr double limit_newton = 60.0;

constexpr std::size_t theorem11_terms = 1000;
constexpr std::size_t u_of_f_terms = 500;
constexpr std::size_t congruence_upto = 30000;
constexpr std::size_t newton_i_max = 10;
constexpr std::size_t newton_precision = 600;
constexpr unsigned depth_alpha_max = 7;

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
public:
    void require(bool ok, const std::string& what)
    {
        if (!ok && pass_) {
            pass_ = false;
            first_ = what;
        }
    }
    void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
    [[nodiscard]] Outcome outcome() const
    {
        return {pass_, pass_ ? notes_ : first_ + (notes_.empty() ? "" : "; " + notes_)};
    }

private:
    bool pass_ = true;
    std::string first_;
    std::string notes_;
};

std::string join(const std::vector<mpq_class>& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + v[i].get_str();
    }
    return s + ")";
}

template <typename T>
std::string join_values(const std::vector<T>& v)
{
    std::ostringstream s;
    s << '[';
    for (std::size_t i = 0; i < v.size(); ++i) {
        s << (i ? "," : "") << v[i];
    }
    s << ']';
    return s.str();
}

std::vector<mpq_class> q(std::initializer_list<long> xs)
{
    return {xs.begin(), xs.end()};
}

bool all_passed(const std::vector<VerificationReport>& rs)
{
    for (const auto& r : rs) {
        if (!r.passed()) {
            return false;
        }
    }
    return !rs.empty();
}

std::string first_failure(const std::vector<VerificationReport>& rs)
{
    for (const auto& r : rs) {
        if (!r.passed()) {
            return r.task + (r.first_violation ? " at " + std::to_string(r.first_violation->index) : std::string())
                   + (r.notes.empty() ? "" : " (" + r.notes.back() + ")");
        }
    }
    return "no reports";
}

Outcome criterion_orders()
{
    Check c;
    const auto f = order_table(cubic_F());
    const auto a = order_table(hauptmodul_A());
    std::vector<std::int64_t> dens;
    for (const auto& e : f.entries) {
        dens.push_back(e.cusp.denominator);
    }
    c.require(dens == std::vector<std::int64_t>{1, 2, 3, 6, 9, 18}, "F cusp denominators");
    c.require(f.orders() == q({-1, -1, 0, 0, 1, 1}), "F orders " + join(f.orders()));
    c.require(a.orders() == q({-1, -1, 1, 1}), "A orders " + join(a.orders()));
    c.note("F " + join(f.orders()) + ", A " + join(a.orders()));
    return c.outcome();
}

Outcome criterion_certification()
{
    Check c;
    const auto f = certify_modular(cubic_F());
    const auto a = certify_modular(hauptmodul_A());
    c.require(f.pass, "F not certified");
    c.require(a.pass, "A not certified");
    c.require(f.delta_product == 81, "F product " + f.delta_product.get_str());
    c.require(a.delta_product == 6561, "A product " + a.delta_product.get_str());
    c.require(f.conditions[3].holds && a.conditions[3].holds, "square condition");
    c.note("prod delta^r: F " + f.delta_product.get_str() + " = 9^2, A " + a.delta_product.get_str() + " = 81^2");
    return c.outcome();
}

Outcome criterion_expansions()
{
    Check c;
    const auto f = q_expansion(cubic_F(), 10).shifted_down(1);
    const auto a = q_expansion(hauptmodul_A(), 5).shifted_down(1);
    c.require(f == TruncatedSeries::from_ints({1, 1, 3, 4, 9, 12, 23, 31, 54}), "F: " + f.to_string());
    c.require(a == TruncatedSeries::from_ints({1, 4, 18, 52}), "A: " + a.to_string());
    c.note("F/q = " + f.to_string(9) + ", A/q = " + a.to_string(4));
    return c.outcome();
}

Outcome criterion_u_of_f()
{
    Check c;
    const std::size_t n = u_of_f_terms;
    const auto uf = u_p(q_expansion(cubic_F(), 3 * n), 3);
    const auto a = q_expansion(hauptmodul_A(), n);
    const mpz_class constant = uf.coefficient(1) / a.coefficient(1);
    c.require(uf.coefficient(0) == 0 && uf.coefficient(1) == constant * a.coefficient(1), "leading terms");
    c.require(constant == 3, "c = " + constant.get_str());

    auto bounds = u3_order_bounds(order_table(cubic_F()));
    const auto a_orders = order_table(hauptmodul_A());
    for (std::size_t i = 0; i < bounds.entries.size(); ++i) {
        bounds.entries[i].order = std::min(bounds.entries[i].order, a_orders.entries[i].order);
    }
    const std::size_t bound = rigorous_pole_bound(bounds);
    c.require(bound == 3, "pole bound " + std::to_string(bound));
    const auto ca = a.scaled(constant);
    c.require(verify_identity_rigorous(uf, ca, bound).passed(), "rigorous check");
    c.require(verify_identity_rigorous(uf, ca, n).passed(), "500-term confirmation");
    c.note("c = " + constant.get_str() + ", certified on " + std::to_string(bound) + " coefficients, confirmed to "
           + std::to_string(n));
    return c.outcome();
}

Outcome criterion_theorem11()
{
    Check c;
    const auto r = verify_theorem_1_1(theorem11_terms);
    c.require(r.passed(), first_failure({r}));
    c.require(r.checked == theorem11_terms, "checked " + std::to_string(r.checked));
    c.note(std::to_string(r.checked) + " coefficients equal");
    return c.outcome();
}

Outcome criterion_theorem12()
{
    Check c;
    c.require(modular_inverse(8, 81) == 71, "8^-1 mod 81");
    const std::uint64_t residues[] = {2, 8, 17, static_cast<std::uint64_t>(modular_inverse(8, 81))};
    const std::uint64_t divisors[] = {3, 27, 27, 243};
    for (unsigned alpha = 1; alpha <= 4; ++alpha) {
        const auto f = CongruenceFamily::cubic(alpha);
        c.require(f.residue == residues[alpha - 1] && f.divisor == divisors[alpha - 1],
                  "family alpha=" + std::to_string(alpha));
    }
    const auto reports = verify_theorem_1_2(4, congruence_upto, 2187);
    c.require(all_passed(reports), first_failure(reports));
    std::vector<std::size_t> counts;
    for (const auto& r : reports) {
        counts.push_back(r.checked);
    }
    c.note("indices checked per alpha " + join_values(counts) + ", mod 3^7");
    return c.outcome();
}

Outcome criterion_watson()
{
    Check c;
    const std::vector<VerificationReport> reports{verify_watson(1, congruence_upto), verify_watson(2, congruence_upto)};
    c.require(all_passed(reports), first_failure(reports));
    c.note("p(5n+4): " + std::to_string(reports[0].checked) + ", p(25n+24): " + std::to_string(reports[1].checked));
    return c.outcome();
}

const NewtonReplay& newton()
{
    static const NewtonReplay replay = replay_newton(newton_i_max, newton_precision);
    return replay;
}

Outcome criterion_newton()
{
    Check c;
    const auto& replay = newton();
    c.require(replay.sigma.integral, "sigma not integral");
    c.require(replay.passed(), first_failure(replay.reports));
    for (std::size_t i = 1; i <= newton_i_max; ++i) {
        c.require(replay.ua[i].degree() <= 3 * i, "deg U(A^" + std::to_string(i) + ")");
        c.require(replay.ufa[i].degree() <= 3 * i + 1, "deg U(F A^" + std::to_string(i) + ")");
    }
    c.note("sigma1 = " + replay.sigma.sigma1.to_string() + ", sigma2 = " + replay.sigma.sigma2.to_string()
           + ", sigma3 = " + replay.sigma.sigma3.to_string());
    return c.outcome();
}

Outcome criterion_properties()
{
    using testing::random_series;
    using testing::random_unit;
    Check c;
    int failures = 0;

    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + t % 25;
        const auto f = random_series(n);
        const auto g = random_series(n);
        const auto h = random_series(n);
        const bool ok = f + g == g + f && f * g == g * f && (f + g) + h == f + (g + h) && (f * g) * h == f * (g * h)
                        && f * (g + h) == f * g + f * h && f * TruncatedSeries::one(n) == f;
        failures += ok ? 0 : 1;
    }
    c.require(failures == 0, "ring axioms");

    for (int t = 0; t < 20; ++t) {
        const auto f = random_unit(30);
        c.require(f * ring_invert(f) == TruncatedSeries::one(30), "f * f^-1");
    }

    for (int t = 0; t < 20; ++t) {
        const std::uint64_t p = t % 2 ? 3 : 5;
        const auto f = random_series(10);
        const auto g = random_series(10 * p);
        c.require(u_p(dilate(f, p) * g, p) == f * u_p(g, p), "U_p(dilate(f) g) = f U_p(g)");
    }

    int certified = 0;
    for (const std::int64_t level : {6, 12, 18, 36}) {
        const auto divs = divisors(level);
        std::uniform_int_distribution<std::int64_t> dist(-6, 6);
        int found = 0;
        for (int attempt = 0; attempt < 400000 && found < 6; ++attempt) {
            EtaExponents exps;
            std::int64_t sum = 0;
            for (std::size_t i = 0; i + 1 < divs.size(); ++i) {
                exps[divs[i]] = dist(testing::rng());
                sum += exps[divs[i]];
            }
            exps[divs.back()] = -sum;
            const EtaQuotient eq(level, exps);
            if (eq.exponents().empty() || !certify_modular(eq).pass) {
                continue;
            }
            ++found;
            c.require(order_table(eq).weighted_sum() == 0, "divisor sum for " + eq.to_string());
        }
        certified += found;
    }
    c.require(certified >= 20, "only " + std::to_string(certified) + " certified quotients");

    for (const auto& eq : {cubic_F(), hauptmodul_A()}) {
        c.require(leading_exponent(eq) == order_table(eq).order_at(eq.level()), "leading exponent " + eq.to_string());
    }

    const auto p = partition_series(26);
    const auto a = cubic_partition_series(26);
    for (int n = 0; n <= 25; ++n) {
        c.require(p.coefficient(n) == testing::count_partitions(n, 1), "p(" + std::to_string(n) + ")");
        c.require(a.coefficient(n) == testing::count_partitions(n, 2), "a(" + std::to_string(n) + ")");
    }
    c.note("100 ring cases, " + std::to_string(certified) + " certified quotients, n <= 25 enumerated");
    return c.outcome();
}

Outcome criterion_valuations()
{
    Check c;
    const auto& replay = newton();
    if (!replay.passed()) {
        c.require(false, "newton replay failed");
        return c.outcome();
    }
    const auto v = newton_valuations(replay);
    auto values = [](const ValuationTable& t) {
        std::vector<long> out;
        for (const auto& x : t.min_valuation) {
            out.push_back(x ? static_cast<long>(*x) : -1);
        }
        return out;
    };
    const auto ua = values(v.ua);
    const auto ufa = values(v.ufa);
    // Frozen from tests/oracles/newton_oracle.py.
    const std::vector<long> ua_expected{2, 0, 0, 1, 0, 0, 1, 0, 0, 2};
    const std::vector<long> ufa_expected{1, 0, 0, 2, 0, 0, 1, 0, 0, 1, 0};
    c.require(ua == ua_expected, "U(A^i) table " + join_values(ua));
    c.require(ufa == ufa_expected, "U(F A^i) table " + join_values(ufa));
    c.require(ufa[0] >= 1, "min v3(U(F)) = " + std::to_string(ufa[0]));

    // Depth iterates L_alpha, where 3^(alpha + delta(alpha)) divides every coefficient.
    const auto iterates = depth_iterates(replay, depth_alpha_max);
    const auto depth = coefficient_valuations(iterates, 3);
    std::vector<long> dv;
    for (std::size_t k = 0; k < depth.min_valuation.size(); ++k) {
        const auto alpha = static_cast<long>(k + 1);
        dv.push_back(depth.min_valuation[k] ? static_cast<long>(*depth.min_valuation[k]) : -1);
        c.require(dv.back() >= alpha + (alpha % 2 == 0 ? 1 : 0), "L_" + std::to_string(alpha) + " valuation");
    }
    c.require(dv == std::vector<long>{1, 3, 3, 5, 5, 7, 7}, "depth table " + join_values(dv));
    c.require(verify_depth_iterates(iterates, 40).passed(), "L_alpha against a(3^alpha n + c_alpha)");

    auto nondecreasing = [](const std::vector<long>& xs) { return std::is_sorted(xs.begin(), xs.end()); };
    c.require(nondecreasing(ua), "min v3 of U(A^i) is not nondecreasing in i: " + join_values(ua));
    c.require(nondecreasing(ufa), "min v3 of U(F A^i) is not nondecreasing in i: " + join_values(ufa));
    c.note("L_1..L_7 min v3 " + join_values(dv) + " (nondecreasing, >= alpha + delta(alpha))");
    return c.outcome();
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double time_limit = 0;
};

} // namespace

int main(int argc, char** argv)
{
    std::set<int> expected_failures;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--expect-fail" && i + 1 < argc) {
            expected_failures.insert(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: " << argv[0] << " [--expect-fail N]...\n";
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "order tables", criterion_orders},
        {2, "certification", criterion_certification},
        {3, "expansions", criterion_expansions},
        {4, "U(F) = 3A", criterion_u_of_f, limit_u_of_f},
        {5, "a(3n+2) product identity to 1000 terms", criterion_theorem11, limit_theorem11},
        {6, "a(3^a n + c_a) congruences, a <= 4", criterion_theorem12, limit_theorem12},
        {7, "watson k = 1, 2", criterion_watson, limit_watson},
        {8, "newton machinery, i <= 10", criterion_newton, limit_newton},
        {9, "property suites", criterion_properties},
        {10, "3-adic valuation table", criterion_valuations},
    };

    int unexpected = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0 && seconds >= c.time_limit) {
            o.pass = false;
            o.detail = "took " + std::to_string(seconds) + " s, limit " + std::to_string(c.time_limit) + " s; "
                       + o.detail;
        }
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(3);
        line << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << "  [" << seconds << " s";
        if (c.time_limit > 0) {
            line << " < " << c.time_limit;
        }
        line << "]  " << o.detail;
        const bool expected_fail = expected_failures.count(c.id) > 0;
        if (!o.pass && expected_fail) {
            line << "  (expected failure)";
        }
        if (o.pass && expected_fail) {
            line << "  (expected to fail, passed)";
        }
        std::cout << line.str() << std::endl;
        if (o.pass == expected_fail) {
            ++unexpected;
        }
    }
    return unexpected == 0 ? 0 : 1;
}
