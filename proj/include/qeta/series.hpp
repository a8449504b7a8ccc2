#pragma once

/**
 * @file series.hpp
 * @brief Truncated formal power series in q with exact coefficients.
 *
 * A TruncatedSeries stores the coefficients of q^0 .. q^(P-1), where P is
 * the precision; everything from q^P on is unknown. Coefficients are
 * arbitrary-precision integers by default. Attaching a modulus m switches
 * the storage to machine-word residues in [0, m), which is what the
 * congruence scans use once the raw integers become too large to carry.
 *
 * All operations are pure: they take series by const reference and return
 * a fresh value. Binary operations require both operands to agree on the
 * modulus (both exact, or both reduced mod the same m) and truncate to the
 * smaller precision.
 */

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace qeta {

inline constexpr std::size_t default_precision = 200;

/// Largest modulus accepted by the residue backend; products of two
/// residues must fit in 64 bits.
inline constexpr std::uint64_t max_residue_modulus = std::uint64_t{1} << 32;

/// Thrown when two series with different modulus state are combined.
class ModulusMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by ring_invert when the constant term is not a unit.
class NonUnitError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Leading exponent of a series, or "zero through the known precision".
struct SeriesValuation {
    std::optional<std::size_t> exponent;

    [[nodiscard]] bool is_zero() const noexcept { return !exponent.has_value(); }
    friend bool operator==(const SeriesValuation&, const SeriesValuation&) = default;
};

class TruncatedSeries {
public:
    /// Zero series with the given precision (>= 1).
    explicit TruncatedSeries(std::size_t precision = 1, std::optional<std::uint64_t> modulus = std::nullopt);

    /// Exact series whose precision is coeffs.size().
    explicit TruncatedSeries(std::vector<mpz_class> coeffs);

    /// Exact series from small integers, padded with zeros to `precision`
    /// (which defaults to the list length).
    static TruncatedSeries from_ints(std::initializer_list<long> coeffs, std::size_t precision = 0);

    /// Series reduced mod `modulus`; values are reduced into [0, modulus).
    static TruncatedSeries from_residues(std::vector<std::uint64_t> residues, std::uint64_t modulus);

    static TruncatedSeries one(std::size_t precision, std::optional<std::uint64_t> modulus = std::nullopt);

    /// c * q^k to the given precision (zero if k >= precision).
    static TruncatedSeries monomial(const mpz_class& c, std::size_t k, std::size_t precision,
                                    std::optional<std::uint64_t> modulus = std::nullopt);

    [[nodiscard]] std::size_t precision() const noexcept;
    [[nodiscard]] const std::optional<std::uint64_t>& modulus() const noexcept { return modulus_; }
    [[nodiscard]] bool is_exact() const noexcept { return !modulus_.has_value(); }

    /// Coefficient of q^n; n must be < precision().
    [[nodiscard]] mpz_class coefficient(std::size_t n) const;

    /// Exact coefficients; throws std::logic_error for a reduced series.
    [[nodiscard]] std::span<const mpz_class> integers() const;
    /// Residues; throws std::logic_error for an exact series.
    [[nodiscard]] std::span<const std::uint64_t> residues() const;

    [[nodiscard]] bool is_zero() const;

    /// First `n` coefficients (n <= precision).
    [[nodiscard]] TruncatedSeries truncated(std::size_t n) const;
    /// Multiply by q^k; the precision grows by k.
    [[nodiscard]] TruncatedSeries shifted_up(std::size_t k) const;
    /// Divide by q^k; requires the first k coefficients to vanish.
    [[nodiscard]] TruncatedSeries shifted_down(std::size_t k) const;
    [[nodiscard]] TruncatedSeries scaled(const mpz_class& c) const;

    /// "q + 4*q^2 + 18*q^3 + O(q^5)", showing at most `max_terms` nonzero terms.
    [[nodiscard]] std::string to_string(std::size_t max_terms = 12) const;

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);

private:
    friend class SeriesAccess;
    std::variant<std::vector<mpz_class>, std::vector<std::uint64_t>> coeffs_;
    std::optional<std::uint64_t> modulus_;
};

/// f + sign * g, truncated to the smaller precision. sign must be +1 or -1.
TruncatedSeries ring_add(const TruncatedSeries& f, const TruncatedSeries& g, int sign = 1);

/// Cauchy product truncated to the smaller precision.
TruncatedSeries ring_mul(const TruncatedSeries& f, const TruncatedSeries& g);

/// Multiplicative inverse; the constant term must be +-1 (exact) or a unit mod m.
TruncatedSeries ring_invert(const TruncatedSeries& f);

/// f^e by repeated squaring; e == 0 gives 1.
TruncatedSeries ring_pow(const TruncatedSeries& f, unsigned long e);

/// prod_{n>=1} (1 - q^(delta n))^exponent, without the q^(delta/24) prefactor.
///
/// Exponents +-1 come straight from the pentagonal number theorem (and its
/// sparse inversion); other exponents are powers of those.
TruncatedSeries eta_product_series(std::int64_t delta, std::int64_t exponent, std::size_t precision,
                                   std::optional<std::uint64_t> modulus = std::nullopt);

/// Substitute q -> q^m. The precision becomes m * precision(f), clamped to
/// `bound` when given.
TruncatedSeries dilate(const TruncatedSeries& f, std::size_t m, std::optional<std::size_t> bound = std::nullopt);

/// U_p: keeps the coefficients at multiples of p. The result precision is
/// floor((P - 1) / p) + 1, so only known coefficients are emitted.
TruncatedSeries u_p(const TruncatedSeries& f, std::uint64_t p);

/// Reduce coefficients into [0, m) and attach modulus m. A series that
/// already carries a modulus must carry a multiple of m.
TruncatedSeries reduce_mod(const TruncatedSeries& f, std::uint64_t m);

SeriesValuation series_valuation(const TruncatedSeries& f);

inline TruncatedSeries operator+(const TruncatedSeries& f, const TruncatedSeries& g) { return ring_add(f, g, 1); }
inline TruncatedSeries operator-(const TruncatedSeries& f, const TruncatedSeries& g) { return ring_add(f, g, -1); }
inline TruncatedSeries operator*(const TruncatedSeries& f, const TruncatedSeries& g) { return ring_mul(f, g); }

} // namespace qeta
