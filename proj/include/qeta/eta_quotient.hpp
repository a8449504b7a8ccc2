#pragma once

/**
 * @file eta_quotient.hpp
 * @brief Eta quotients on Gamma_0(N): modularity test, cusps, orders at cusps.
 *
 * An eta quotient prod_{delta | N} eta(delta z)^{r_delta} is stored as its
 * level and exponent map. Everything that depends only on the exponents
 * (the four modularity conditions, the orders at cusps, the leading
 * exponent) is computed exactly with rationals; q-expansions are produced
 * on demand through series-core.
 */

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qeta/series.hpp"

namespace qeta {

class LevelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using EtaExponents = std::map<std::int64_t, std::int64_t>;

class EtaQuotient {
public:
    /// Throws LevelError if level < 1 or some delta does not divide level.
    /// Zero exponents are dropped.
    EtaQuotient(std::int64_t level, EtaExponents exponents);

    [[nodiscard]] std::int64_t level() const noexcept { return level_; }
    [[nodiscard]] const EtaExponents& exponents() const noexcept { return exponents_; }
    [[nodiscard]] std::int64_t exponent(std::int64_t delta) const;

    /// (1/2) * sum r_delta.
    [[nodiscard]] mpq_class weight() const;

    /// Same level; exponents add.
    [[nodiscard]] EtaQuotient times(const EtaQuotient& other) const;
    /// Exponents scaled by k.
    [[nodiscard]] EtaQuotient power(std::int64_t k) const;

    /// "9:1,18:1,1:-1,2:-1" style, divisors in increasing order.
    [[nodiscard]] std::string exponent_string() const;
    /// "eta(1z)^-1 * eta(2z)^-1 * eta(9z) * eta(18z)".
    [[nodiscard]] std::string to_string() const;

    /// Parse "delta:r,delta:r,..." (whitespace allowed). Throws std::invalid_argument.
    static EtaQuotient parse(std::int64_t level, const std::string& text);

    friend bool operator==(const EtaQuotient&, const EtaQuotient&) = default;

private:
    std::int64_t level_;
    EtaExponents exponents_;
};

struct Cusp {
    std::int64_t numerator;
    std::int64_t denominator;
    /// Number of inequivalent cusps with this denominator: phi(gcd(d, N/d)).
    std::int64_t multiplicity;

    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const Cusp&, const Cusp&) = default;
};

struct CuspOrder {
    Cusp cusp;
    mpq_class order;
};

struct CuspOrderTable {
    std::int64_t level = 1;
    /// Sorted by denominator.
    std::vector<CuspOrder> entries;

    /// Order recorded for the cusp with denominator d; throws std::out_of_range.
    [[nodiscard]] const mpq_class& order_at(std::int64_t denominator) const;
    /// sum over entries of multiplicity * order.
    [[nodiscard]] mpq_class weighted_sum() const;
    [[nodiscard]] std::vector<mpq_class> orders() const;
};

struct ConditionOutcome {
    std::string name;
    bool holds = false;
    std::string detail;
};

struct CertResult {
    bool pass = false;
    /// weight zero; sum delta r == 0 mod 24; sum (N/delta) r == 0 mod 24;
    /// prod delta^r is a rational square.
    std::array<ConditionOutcome, 4> conditions;
    /// prod delta^{r_delta} as a reduced rational.
    mpq_class delta_product;
};

/// Newman / Gordon-Hughes sufficient conditions for membership in M_0(Gamma_0(N)).
CertResult certify_modular(const EtaQuotient& eq);

/// One cusp per denominator d | N, with c the least positive integer
/// coprime to d (0/1 for d = 1).
std::vector<Cusp> cusp_set(std::int64_t level);

/// Ligozat's order of vanishing at the cusp c/d:
///   (N/24) * sum_{delta | N} gcd(d, delta)^2 r_delta / (gcd(d, N/d) * d * delta).
/// Throws LevelError when d does not divide the level.
mpq_class ligozat_order(const EtaQuotient& eq, const Cusp& cusp);

CuspOrderTable order_table(const EtaQuotient& eq);

/// (1/24) * sum delta * r_delta: the exponent of the q-power prefactor.
mpq_class leading_exponent(const EtaQuotient& eq);

/// prod_{delta} prod_n (1 - q^{delta n})^{r_delta}, without the prefactor.
TruncatedSeries product_series(const EtaQuotient& eq, std::size_t precision,
                               std::optional<std::uint64_t> modulus = std::nullopt);

/// Full q-expansion q^{leading exponent} * product_series. Throws
/// std::domain_error for a non-integral or negative leading exponent.
TruncatedSeries q_expansion(const EtaQuotient& eq, std::size_t precision,
                            std::optional<std::uint64_t> modulus = std::nullopt);

/// Reinterpret at level M; throws LevelError unless level | M.
EtaQuotient lift_level(const EtaQuotient& eq, std::int64_t new_level);

/// Lower bounds for the orders of U_3(f) at the cusps 0, 1/2, 1/3, 1/6 of
/// Gamma_0(6), given the order table of f on Gamma_0(18):
///   ord_0     >= min(ord_0 f, ord_{1/3} f)
///   ord_{1/2} >= min(ord_{1/2} f, ord_{1/6} f)
///   ord_{1/3} >= ceil(ord_{1/9} f / 3)
///   ord_{1/6} >= ceil(ord_{1/18} f / 3)
/// Throws LevelError unless table18.level == 18.
CuspOrderTable u3_order_bounds(const CuspOrderTable& table18);

} // namespace qeta
