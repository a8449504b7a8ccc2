#include "qeta/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "qeta/congruence.hpp"
#include "qeta/dsl/executor.hpp"
#include "qeta/dsl/parser.hpp"
#include "qeta/eta_quotient.hpp"
#include "qeta/hauptmodul.hpp"

namespace qeta {

std::string report_to_json(const VerificationReport& report)
{
    nlohmann::ordered_json j;
    j["task"] = report.task;
    j["status"] = to_string(report.status);
    j["checked"] = report.checked;
    if (report.first_violation) {
        j["first_violation"] = {{"index", report.first_violation->index}, {"value", report.first_violation->value}};
    }
    if (!report.tables.empty()) {
        auto tables = nlohmann::ordered_json::array();
        for (const auto& t : report.tables) {
            tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", t.rows}});
        }
        j["tables"] = std::move(tables);
    }
    if (!report.notes.empty()) {
        j["notes"] = report.notes;
    }
    return j.dump();
}

int exit_code_for(const std::vector<VerificationReport>& reports)
{
    int code = 0;
    for (const auto& r : reports) {
        if (r.status == Status::error) {
            return 2;
        }
        if (r.status == Status::fail) {
            code = 1;
        }
    }
    return code;
}

namespace {

/// A user-facing input problem: reported on stderr with exit code 2.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::size_t terms = default_precision;
    std::optional<std::uint64_t> modulus;
    bool json = false;
};

struct QuotientOptions {
    std::int64_t level = 0;
    std::string eta;

    [[nodiscard]] EtaQuotient quotient() const { return EtaQuotient::parse(level, eta); }
};

void add_quotient_options(CLI::App* cmd, QuotientOptions& q)
{
    cmd->add_option("--level", q.level, "Level N of Gamma_0(N)")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--eta", q.eta, "Exponents as \"delta:r,...\"")->required();
}

ReportTable coefficient_table(const TruncatedSeries& s)
{
    ReportTable t{"coefficients", {"n", "coefficient"}, {}};
    for (std::size_t n = 0; n < s.precision(); ++n) {
        t.rows.push_back({std::to_string(n), s.coefficient(n).get_str()});
    }
    return t;
}

VerificationReport series_report(std::string task, const TruncatedSeries& s)
{
    VerificationReport r;
    r.task = std::move(task);
    r.checked = s.precision();
    r.notes.push_back(s.to_string());
    r.tables.push_back(coefficient_table(s));
    return r;
}

std::vector<mpq_class> parse_rational_list(const std::string& text)
{
    std::vector<mpq_class> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first == std::string::npos) {
            throw InputError("empty entry in order list '" + text + "'");
        }
        mpq_class q;
        if (q.set_str(item.substr(first, last - first + 1), 10) != 0 || q.get_den() == 0) {
            throw InputError("bad rational '" + item + "'");
        }
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

VerificationReport certify_report(const EtaQuotient& eq)
{
    const CertResult cert = certify_modular(eq);
    VerificationReport r;
    r.task = "certify " + eq.to_string();
    ReportTable t{"conditions", {"condition", "holds", "detail"}, {}};
    for (const auto& c : cert.conditions) {
        t.rows.push_back({c.name, c.holds ? "true" : "false", c.detail});
    }
    r.tables.push_back(std::move(t));
    r.notes.push_back("prod delta^r = " + cert.delta_product.get_str());
    r.checked = cert.conditions.size();
    for (std::size_t i = 0; i < cert.conditions.size(); ++i) {
        if (!cert.conditions[i].holds) {
            r.record_violation(i, cert.conditions[i].name);
        }
    }
    return r;
}

void flag_uncertified(VerificationReport& r, const EtaQuotient& eq)
{
    if (!certify_modular(eq).pass) {
        r.notes.push_back("warning: not certified as a modular function on Gamma0(" + std::to_string(eq.level()) + ")");
    }
}

VerificationReport orders_report(const EtaQuotient& eq, const std::optional<std::string>& expect)
{
    const CuspOrderTable table = order_table(eq);
    VerificationReport r;
    r.task = "orders " + eq.to_string();
    std::vector<mpq_class> expected;
    if (expect) {
        expected = parse_rational_list(*expect);
    }
    ReportTable t{"orders", {"cusp", "multiplicity", "order"}, {}};
    for (const auto& e : table.entries) {
        t.rows.push_back({e.cusp.to_string(), std::to_string(e.cusp.multiplicity), e.order.get_str()});
    }
    r.tables.push_back(std::move(t));
    r.notes.push_back("sum of multiplicity * order = " + table.weighted_sum().get_str());
    flag_uncertified(r, eq);
    r.checked = table.entries.size();
    if (expect) {
        const auto got = table.orders();
        if (got.size() != expected.size()) {
            r.record_violation(std::min(got.size(), expected.size()),
                               "expected " + std::to_string(expected.size()) + " orders, got "
                                   + std::to_string(got.size()));
        }
        for (std::size_t i = 0; i < std::min(got.size(), expected.size()); ++i) {
            if (got[i] != expected[i]) {
                r.record_violation(i, got[i].get_str());
            }
        }
    }
    return r;
}

/// Degree bound for a level-6 function from the pole orders at 0 and 1/2.
std::size_t degree_from_orders(const CuspOrderTable& bounds)
{
    mpz_class worst = 0;
    for (const std::int64_t d : {1, 2}) {
        mpz_class c;
        mpz_cdiv_q(c.get_mpz_t(), bounds.order_at(d).get_num_mpz_t(), bounds.order_at(d).get_den_mpz_t());
        if (-c > worst) {
            worst = -c;
        }
    }
    return worst.get_ui();
}

VerificationReport decompose_report(const EtaQuotient& eq, std::uint64_t p, std::optional<std::size_t> degree,
                                    std::size_t terms)
{
    VerificationReport r;
    std::size_t bound = 0;
    TruncatedSeries g(1);
    if (p == 0) {
        r.task = "decompose " + eq.to_string();
        g = q_expansion(eq, terms);
        if (!degree) {
            bound = degree_from_orders(order_table(lift_level(eq, 6)));
        }
    } else {
        if (p != 3) {
            throw InputError("decompose supports --u 3 only");
        }
        r.task = "decompose U3(" + eq.to_string() + ")";
        g = u_p(q_expansion(eq, terms * p), p);
        if (!degree) {
            bound = degree_from_orders(u3_order_bounds(order_table(lift_level(eq, 18))));
        }
    }
    if (degree) {
        bound = *degree;
    }
    if (terms <= bound) {
        throw InputError("--terms must exceed the degree bound " + std::to_string(bound));
    }
    const TruncatedSeries a = q_expansion(hauptmodul_A(), terms);
    const DecompositionResult d = decompose_in_hauptmodul(g, a, bound);
    r.checked = d.checked_through;
    r.notes.push_back("degree bound " + std::to_string(bound));
    if (d.ok()) {
        r.notes.push_back("= " + d.polynomial->to_string());
        ReportTable t{"polynomial", {"j", "coefficient of A^j"}, {}};
        for (std::size_t j = 0; j < d.polynomial->coefficients().size(); ++j) {
            t.rows.push_back({std::to_string(j), d.polynomial->coefficient(j).get_str()});
        }
        r.tables.push_back(std::move(t));
    } else {
        r.record_violation(d.mismatch_exponent.value_or(0), "nonzero residual");
    }
    return r;
}

std::vector<VerificationReport> newton_reports(std::size_t i_max, std::size_t precision, unsigned depth)
{
    NewtonReplay replay = replay_newton(i_max, precision);
    std::vector<VerificationReport> out = replay.reports;
    if (!replay.passed()) {
        return out;
    }
    const NewtonValuations v = newton_valuations(replay);
    VerificationReport table;
    table.task = "newton: 3-adic valuations";
    ReportTable t{"min_v3", {"i", "U(A^i)", "U(F A^i)"}, {}};
    auto cell = [](const std::optional<unsigned long>& x) { return x ? std::to_string(*x) : std::string("-"); };
    for (std::size_t i = 0; i <= i_max; ++i) {
        t.rows.push_back({std::to_string(i), i == 0 ? std::string("-") : cell(v.ua.min_valuation[i - 1]),
                          cell(v.ufa.min_valuation[i])});
    }
    table.checked = i_max + 1;
    table.tables.push_back(std::move(t));
    table.notes.push_back("sigma1 = " + replay.sigma.sigma1.to_string());
    table.notes.push_back("sigma2 = " + replay.sigma.sigma2.to_string());
    table.notes.push_back("sigma3 = " + replay.sigma.sigma3.to_string());
    out.push_back(std::move(table));
    if (depth > 0) {
        out.push_back(verify_depth_iterates(depth_iterates(replay, depth), 40));
    }
    return out;
}

void emit(const std::vector<VerificationReport>& reports, const GlobalOptions& g, std::ostream& out)
{
    for (const auto& r : reports) {
        if (g.json) {
            out << report_to_json(r) << '\n';
        } else {
            out << render_text(r);
        }
    }
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Eta-quotient and partition congruence toolkit", "qeta"};
    app.fallthrough();
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--terms", g.terms, "Number of q-expansion terms")->check(CLI::PositiveNumber);
    app.add_option("--modulus", g.modulus, "Reduce coefficients modulo m")->check(CLI::Range(std::uint64_t{2}, max_residue_modulus));
    app.add_flag("--json", g.json, "Emit JSON Lines reports");

    std::string job_path;
    auto* run = app.add_subcommand("run", "Execute a .qeta job file");
    run->add_option("file", job_path, "Job file")->required();

    QuotientOptions certify_q;
    auto* certify = app.add_subcommand("certify", "Check the four modularity conditions");
    add_quotient_options(certify, certify_q);

    QuotientOptions orders_q;
    std::optional<std::string> orders_expect;
    auto* orders = app.add_subcommand("orders", "Cusp order table");
    add_quotient_options(orders, orders_q);
    orders->add_option("--expect", orders_expect, "Expected orders \"r1,r2,...\" in cusp order");

    QuotientOptions expand_q;
    auto* expand = app.add_subcommand("expand", "q-expansion including the q-power prefactor");
    add_quotient_options(expand, expand_q);

    QuotientOptions u_q;
    std::uint64_t u_prime = 3;
    auto* u = app.add_subcommand("u", "Apply U_p to a q-expansion");
    add_quotient_options(u, u_q);
    u->add_option("--p", u_prime, "p")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1000}));

    QuotientOptions dec_q;
    std::uint64_t dec_u = 0;
    std::optional<std::size_t> dec_degree;
    auto* decompose = app.add_subcommand("decompose", "Write a level-6 function as a polynomial in A");
    add_quotient_options(decompose, dec_q);
    decompose->add_option("--u", dec_u, "Apply U_3 first (pass 3)");
    decompose->add_option("--degree", dec_degree, "Degree bound (default: from cusp orders)");

    auto* theorem11 = app.add_subcommand("theorem11", "Generating function of a(3n+2) as an eta product");

    unsigned alpha_max = 4;
    std::size_t t12_upto = default_index_max;
    auto* theorem12 = app.add_subcommand("theorem12", "a(3^alpha n + c_alpha) congruences");
    theorem12->add_option("--alpha-max", alpha_max)->check(CLI::Range(1u, 12u));
    theorem12->add_option("--upto", t12_upto, "Largest index checked");

    unsigned k_max = 2;
    std::size_t watson_upto = default_index_max;
    auto* watson = app.add_subcommand("watson", "p(5^k n + r_k) congruences");
    watson->add_option("--k-max", k_max)->check(CLI::Range(1u, 3u));
    watson->add_option("--upto", watson_upto, "Largest index checked");

    auto* replay3 = app.add_subcommand("replay3", "Replay the proof that U(F) = 3A");

    std::size_t i_max = 10;
    std::size_t newton_precision = 600;
    unsigned depth = 0;
    auto* newton = app.add_subcommand("newton", "Newton recurrences for U(A^i) and U(F A^i)");
    newton->add_option("--i-max", i_max)->check(CLI::Range(std::size_t{3}, std::size_t{40}));
    newton->add_option("--precision", newton_precision, "Terms kept after U_3");
    newton->add_option("--depth", depth, "Also check L_1..L_depth against a(3^alpha n + c_alpha)")
        ->check(CLI::Range(0u, 7u));

    std::vector<std::string> argv_tail(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(argv_tail.begin(), argv_tail.end());
    try {
        app.parse(argv_tail);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        std::vector<VerificationReport> reports;
        if (run->parsed()) {
            const std::string source = read_file(job_path);
            auto parsed = dsl::parse_program(source);
            if (const auto* d = std::get_if<dsl::Diagnostic>(&parsed)) {
                err << job_path << ':' << d->to_string() << '\n';
                return 2;
            }
            reports = dsl::execute_program(std::get<dsl::Program>(parsed), g.terms);
            for (const auto& r : reports) {
                if (r.status == Status::error) {
                    err << job_path << ": " << r.task << ": " << (r.notes.empty() ? "" : r.notes.back()) << '\n';
                }
            }
        } else if (certify->parsed()) {
            reports.push_back(certify_report(certify_q.quotient()));
        } else if (orders->parsed()) {
            reports.push_back(orders_report(orders_q.quotient(), orders_expect));
        } else if (expand->parsed()) {
            const EtaQuotient eq = expand_q.quotient();
            reports.push_back(series_report("expand " + eq.to_string(), q_expansion(eq, g.terms, g.modulus)));
            flag_uncertified(reports.back(), eq);
        } else if (u->parsed()) {
            const EtaQuotient eq = u_q.quotient();
            const TruncatedSeries s = u_p(q_expansion(eq, g.terms * u_prime, g.modulus), u_prime);
            reports.push_back(series_report("U" + std::to_string(u_prime) + "(" + eq.to_string() + ")", s));
            flag_uncertified(reports.back(), eq);
        } else if (decompose->parsed()) {
            reports.push_back(decompose_report(dec_q.quotient(), dec_u, dec_degree, g.terms));
        } else if (theorem11->parsed()) {
            if (g.terms < 10) {
                throw InputError("theorem11 needs --terms >= 10");
            }
            reports.push_back(verify_theorem_1_1(g.terms));
        } else if (theorem12->parsed()) {
            reports = verify_theorem_1_2(alpha_max, t12_upto, g.modulus.value_or(theorem12_modulus));
        } else if (watson->parsed()) {
            for (unsigned k = 1; k <= k_max; ++k) {
                reports.push_back(verify_watson(k, watson_upto));
            }
        } else if (replay3->parsed()) {
            reports = replay_section_3(g.terms);
        } else if (newton->parsed()) {
            reports = newton_reports(i_max, newton_precision, depth);
        }
        emit(reports, g, out);
        return exit_code_for(reports);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace qeta
