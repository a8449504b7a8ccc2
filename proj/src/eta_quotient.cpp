#include "qeta/eta_quotient.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "qeta/arith.hpp"

namespace qeta {

namespace {

mpq_class ceil_rational(const mpq_class& x)
{
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return mpq_class(c);
}

std::string rational_string(const mpq_class& x)
{
    return x.get_str();
}

} // namespace

// ---------------------------------------------------------------------------
// EtaQuotient

EtaQuotient::EtaQuotient(std::int64_t level, EtaExponents exponents)
    : level_(level)
{
    if (level < 1) {
        throw LevelError("eta quotient level must be positive, got " + std::to_string(level));
    }
    for (const auto& [delta, r] : exponents) {
        if (delta < 1 || level % delta != 0) {
            throw LevelError("eta(" + std::to_string(delta) + "z): " + std::to_string(delta)
                             + " does not divide level " + std::to_string(level));
        }
        if (r != 0) {
            exponents_.emplace(delta, r);
        }
    }
}

std::int64_t EtaQuotient::exponent(std::int64_t delta) const
{
    auto it = exponents_.find(delta);
    return it == exponents_.end() ? 0 : it->second;
}

mpq_class EtaQuotient::weight() const
{
    long sum = 0;
    for (const auto& [delta, r] : exponents_) {
        sum += r;
    }
    mpq_class w(sum, 2);
    w.canonicalize();
    return w;
}

EtaQuotient EtaQuotient::times(const EtaQuotient& other) const
{
    if (other.level_ != level_) {
        throw LevelError("cannot multiply eta quotients of levels " + std::to_string(level_) + " and "
                         + std::to_string(other.level_));
    }
    EtaExponents sum = exponents_;
    for (const auto& [delta, r] : other.exponents_) {
        sum[delta] += r;
    }
    return EtaQuotient(level_, std::move(sum));
}

EtaQuotient EtaQuotient::power(std::int64_t k) const
{
    EtaExponents scaled;
    for (const auto& [delta, r] : exponents_) {
        scaled[delta] = r * k;
    }
    return EtaQuotient(level_, std::move(scaled));
}

std::string EtaQuotient::exponent_string() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [delta, r] : exponents_) {
        os << (first ? "" : ",") << delta << ":" << r;
        first = false;
    }
    return os.str();
}

std::string EtaQuotient::to_string() const
{
    if (exponents_.empty()) {
        return "1";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& [delta, r] : exponents_) {
        os << (first ? "" : " * ") << "eta(" << delta << "z)";
        if (r != 1) {
            os << "^" << r;
        }
        first = false;
    }
    return os.str();
}

EtaQuotient EtaQuotient::parse(std::int64_t level, const std::string& text)
{
    EtaExponents exps;
    std::string cleaned;
    std::copy_if(text.begin(), text.end(), std::back_inserter(cleaned), [](char c) { return c != ' ' && c != '\t'; });
    if (cleaned.empty()) {
        return EtaQuotient(level, {});
    }
    std::istringstream is(cleaned);
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
            throw std::invalid_argument("malformed eta exponent entry '" + item + "', expected delta:r");
        }
        std::size_t used_d = 0;
        std::size_t used_r = 0;
        std::int64_t delta = 0;
        std::int64_t r = 0;
        try {
            delta = std::stoll(item.substr(0, colon), &used_d);
            r = std::stoll(item.substr(colon + 1), &used_r);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed eta exponent entry '" + item + "'");
        }
        if (used_d != colon || used_r != item.size() - colon - 1) {
            throw std::invalid_argument("malformed eta exponent entry '" + item + "'");
        }
        exps[delta] += r;
    }
    return EtaQuotient(level, std::move(exps));
}

// ---------------------------------------------------------------------------
// Cusps and orders

std::string Cusp::to_string() const
{
    if (denominator == 1) {
        return "0";
    }
    return std::to_string(numerator) + "/" + std::to_string(denominator);
}

const mpq_class& CuspOrderTable::order_at(std::int64_t denominator) const
{
    for (const auto& e : entries) {
        if (e.cusp.denominator == denominator) {
            return e.order;
        }
    }
    throw std::out_of_range("no cusp with denominator " + std::to_string(denominator) + " at level "
                            + std::to_string(level));
}

mpq_class CuspOrderTable::weighted_sum() const
{
    mpq_class sum = 0;
    for (const auto& e : entries) {
        sum += e.order * e.cusp.multiplicity;
    }
    return sum;
}

std::vector<mpq_class> CuspOrderTable::orders() const
{
    std::vector<mpq_class> out;
    out.reserve(entries.size());
    for (const auto& e : entries) {
        out.push_back(e.order);
    }
    return out;
}

CertResult certify_modular(const EtaQuotient& eq)
{
    const std::int64_t n = eq.level();
    CertResult result;

    long sum_r = 0;
    long sum_delta_r = 0;
    long sum_codelta_r = 0;
    std::map<std::int64_t, long> prime_exponents;
    mpq_class product = 1;
    for (const auto& [delta, r] : eq.exponents()) {
        sum_r += r;
        sum_delta_r += delta * r;
        sum_codelta_r += (n / delta) * r;
        for (const auto& [p, e] : factorize(delta)) {
            prime_exponents[p] += static_cast<long>(e) * r;
        }
        mpz_class power;
        mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(delta),
                      static_cast<unsigned long>(r < 0 ? -r : r));
        product *= r < 0 ? mpq_class(mpz_class(1), power) : mpq_class(power);
    }
    product.canonicalize();
    result.delta_product = product;

    auto& weight = result.conditions[0];
    weight.name = "weight zero";
    weight.holds = sum_r == 0;
    weight.detail = "(1/2) * sum r = " + rational_string(eq.weight());

    auto& level_sum = result.conditions[1];
    level_sum.name = "sum delta*r == 0 mod 24";
    level_sum.holds = sum_delta_r % 24 == 0;
    level_sum.detail = "sum delta*r = " + std::to_string(sum_delta_r);

    auto& co_sum = result.conditions[2];
    co_sum.name = "sum (N/delta)*r == 0 mod 24";
    co_sum.holds = sum_codelta_r % 24 == 0;
    co_sum.detail = "sum (N/delta)*r = " + std::to_string(sum_codelta_r);

    auto& square = result.conditions[3];
    square.name = "prod delta^r is a rational square";
    square.holds = std::all_of(prime_exponents.begin(), prime_exponents.end(),
                               [](const auto& pe) { return pe.second % 2 == 0; });
    square.detail = "prod delta^r = " + rational_string(product);

    result.pass = std::all_of(result.conditions.begin(), result.conditions.end(),
                              [](const ConditionOutcome& c) { return c.holds; });
    return result;
}

std::vector<Cusp> cusp_set(std::int64_t level)
{
    if (level < 1) {
        throw LevelError("cusp_set: level must be positive");
    }
    std::vector<Cusp> cusps;
    for (std::int64_t d : divisors(level)) {
        std::int64_t c = 0;
        if (d > 1) {
            c = 1;
            while (std::gcd(c, d) != 1) {
                ++c;
            }
        }
        cusps.push_back({c, d, euler_phi(std::gcd(d, level / d))});
    }
    return cusps;
}

mpq_class ligozat_order(const EtaQuotient& eq, const Cusp& cusp)
{
    const std::int64_t n = eq.level();
    const std::int64_t d = cusp.denominator;
    if (d < 1 || n % d != 0) {
        throw LevelError("cusp denominator " + std::to_string(d) + " does not divide level " + std::to_string(n));
    }
    mpq_class sum = 0;
    for (const auto& [delta, r] : eq.exponents()) {
        const std::int64_t g = std::gcd(d, delta);
        sum += mpq_class(mpz_class(g * g * r), mpz_class(std::gcd(d, n / d) * d * delta));
    }
    mpq_class order = sum * mpq_class(n, 24);
    order.canonicalize();
    return order;
}

CuspOrderTable order_table(const EtaQuotient& eq)
{
    CuspOrderTable table;
    table.level = eq.level();
    for (const Cusp& c : cusp_set(eq.level())) {
        table.entries.push_back({c, ligozat_order(eq, c)});
    }
    return table;
}

mpq_class leading_exponent(const EtaQuotient& eq)
{
    long sum = 0;
    for (const auto& [delta, r] : eq.exponents()) {
        sum += delta * r;
    }
    mpq_class e(sum, 24);
    e.canonicalize();
    return e;
}

TruncatedSeries product_series(const EtaQuotient& eq, std::size_t precision, std::optional<std::uint64_t> modulus)
{
    TruncatedSeries result = TruncatedSeries::one(precision, modulus);
    for (const auto& [delta, r] : eq.exponents()) {
        result = ring_mul(result, eta_product_series(delta, r, precision, modulus));
    }
    return result;
}

TruncatedSeries q_expansion(const EtaQuotient& eq, std::size_t precision, std::optional<std::uint64_t> modulus)
{
    const mpq_class lead = leading_exponent(eq);
    if (lead.get_den() != 1) {
        throw std::domain_error("q_expansion: leading exponent " + lead.get_str() + " is not an integer");
    }
    if (lead < 0) {
        throw std::domain_error("q_expansion: negative leading exponent " + lead.get_str() + " is not supported");
    }
    const auto shift = static_cast<std::size_t>(lead.get_num().get_ui());
    if (shift >= precision) {
        return TruncatedSeries(precision, modulus);
    }
    return product_series(eq, precision - shift, modulus).shifted_up(shift);
}

EtaQuotient lift_level(const EtaQuotient& eq, std::int64_t new_level)
{
    if (new_level < 1 || new_level % eq.level() != 0) {
        throw LevelError("cannot lift level " + std::to_string(eq.level()) + " to " + std::to_string(new_level));
    }
    return EtaQuotient(new_level, eq.exponents());
}

CuspOrderTable u3_order_bounds(const CuspOrderTable& table18)
{
    if (table18.level != 18) {
        throw LevelError("u3_order_bounds expects a level-18 table, got level " + std::to_string(table18.level));
    }
    const auto cusps6 = cusp_set(6);
    auto ord = [&](std::int64_t d) -> const mpq_class& { return table18.order_at(d); };
    CuspOrderTable bounds;
    bounds.level = 6;
    bounds.entries = {
        {cusps6[0], std::min(ord(1), ord(3))},
        {cusps6[1], std::min(ord(2), ord(6))},
        {cusps6[2], ceil_rational(ord(9) / 3)},
        {cusps6[3], ceil_rational(ord(18) / 3)},
    };
    return bounds;
}

} // namespace qeta
