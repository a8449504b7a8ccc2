#pragma once

/**
 * @file hauptmodul.hpp
 * @brief Polynomials in a Hauptmodul, coefficient matching, and the
 *        Newton-identity recurrence for U(A^i).
 *
 * A modular function on a genus-zero curve with poles only where the
 * Hauptmodul A has them is a polynomial in A. Given q-expansions, the
 * polynomial is recovered by peeling coefficients against the unitriangular
 * basis A^j = q^j + O(q^{j+1}); the residual must then vanish through the
 * available precision.
 */

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qeta/eta_quotient.hpp"
#include "qeta/report.hpp"
#include "qeta/series.hpp"

namespace qeta {

class DecompositionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// sum_j c_j A^j with exact rational coefficients. Trailing zeros are
/// trimmed, so the zero polynomial has no coefficients.
class HauptPolynomial {
public:
    HauptPolynomial() = default;
    explicit HauptPolynomial(std::vector<mpq_class> coeffs);
    static HauptPolynomial from_ints(std::initializer_list<long> coeffs);

    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
    /// Degree; 0 for the zero polynomial as well (check is_zero()).
    [[nodiscard]] std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    [[nodiscard]] const std::vector<mpq_class>& coefficients() const noexcept { return coeffs_; }
    /// Coefficient of A^j (zero past the degree).
    [[nodiscard]] mpq_class coefficient(std::size_t j) const;
    [[nodiscard]] bool is_integral() const;

    [[nodiscard]] std::string to_string() const;

    friend HauptPolynomial operator+(const HauptPolynomial& a, const HauptPolynomial& b);
    friend HauptPolynomial operator-(const HauptPolynomial& a, const HauptPolynomial& b);
    friend HauptPolynomial operator*(const HauptPolynomial& a, const HauptPolynomial& b);
    friend HauptPolynomial operator*(const mpq_class& c, const HauptPolynomial& p);
    friend bool operator==(const HauptPolynomial& a, const HauptPolynomial& b) { return a.coeffs_ == b.coeffs_; }

private:
    void trim();
    std::vector<mpq_class> coeffs_;
};

struct DecompositionResult {
    /// Present iff the residual vanished through `checked_through`.
    std::optional<HauptPolynomial> polynomial;
    /// First exponent at which g - sum c_j A^j is nonzero.
    std::optional<std::size_t> mismatch_exponent;
    /// Number of coefficients compared (exponents 0 .. checked_through-1).
    std::size_t checked_through = 0;

    [[nodiscard]] bool ok() const noexcept { return polynomial.has_value(); }
};

/// Caches powers of a normalized Hauptmodul expansion A = q + O(q^2) so
/// that many functions can be decomposed against it.
class HauptmodulBasis {
public:
    /// Throws DecompositionError unless A is exact with valuation 1 and
    /// leading coefficient 1.
    HauptmodulBasis(TruncatedSeries hauptmodul, std::size_t max_degree);

    [[nodiscard]] const TruncatedSeries& hauptmodul() const noexcept { return powers_.at(1); }
    [[nodiscard]] std::size_t max_degree() const noexcept { return powers_.size() - 1; }
    [[nodiscard]] std::size_t precision() const noexcept { return powers_.front().precision(); }
    /// A^j to the basis precision; extends the cache on demand.
    const TruncatedSeries& power(std::size_t j);

    DecompositionResult decompose(const TruncatedSeries& g, std::size_t degree_bound);
    TruncatedSeries evaluate(const HauptPolynomial& p);

private:
    std::vector<TruncatedSeries> powers_;
};

/// Solve g = sum_{j <= degree_bound} c_j A^j by unitriangular peeling.
/// Throws DecompositionError when A is not normalized, g has negative
/// valuation or is reduced, or either precision is <= degree_bound. A
/// nonzero residual is reported in the result, not thrown.
DecompositionResult decompose_in_hauptmodul(const TruncatedSeries& g, const TruncatedSeries& hauptmodul,
                                            std::size_t degree_bound);

/// sum_j c_j A^j to A's precision. Rational coefficients are allowed as
/// long as the result is integral; otherwise std::domain_error.
TruncatedSeries evaluate_poly(const HauptPolynomial& p, const TruncatedSeries& hauptmodul);

/// 1 + sum over cusps of multiplicity * max(0, -ceil(lower bound)): the
/// number of leading coefficients whose vanishing forces a weight-0
/// modular function with these order bounds to vanish identically.
std::size_t rigorous_pole_bound(const CuspOrderTable& lower_bounds);

/// Pass iff lhs and rhs agree on q^0 .. q^{bound-1}. Throws
/// std::invalid_argument if either precision is below bound.
VerificationReport verify_identity_rigorous(const TruncatedSeries& lhs, const TruncatedSeries& rhs,
                                            std::size_t bound);

struct SigmaTriple {
    HauptPolynomial sigma1;
    HauptPolynomial sigma2;
    HauptPolynomial sigma3;
    /// All three polynomials have integer coefficients.
    bool integral = false;
};

/// Elementary symmetric functions from the first three power sums:
///   e1 = p1, e2 = (e1 p1 - p2) / 2, e3 = (e2 p1 - e1 p2 + p3) / 3.
SigmaTriple sigma_from_power_sums(const HauptPolynomial& p1, const HauptPolynomial& p2, const HauptPolynomial& p3);

/// Check seq[i] == sigma1 seq[i-1] - sigma2 seq[i-2] + sigma3 seq[i-3] for
/// 4 <= i <= i_max, where seq[k] (k >= 1) is the polynomial for the k-th
/// term and seq[0] is ignored. Throws std::invalid_argument if seq has
/// fewer than i_max + 1 entries.
VerificationReport newton_recurrence_check(std::size_t i_max, const SigmaTriple& sigma,
                                           std::span<const HauptPolynomial> seq, const std::string& label = "U(A^i)");

/// Apply the recurrence forward: extends seq (indexed as above) to size n + 1.
void extend_by_recurrence(const SigmaTriple& sigma, std::vector<HauptPolynomial>& seq, std::size_t n);

/// Per-polynomial minimum p-adic valuation over nonzero coefficients;
/// nullopt marks the zero polynomial.
struct ValuationTable {
    unsigned long prime = 3;
    std::vector<std::optional<unsigned long>> min_valuation;
};

/// Throws std::domain_error on a non-integral coefficient.
ValuationTable coefficient_valuations(std::span<const HauptPolynomial> polys, unsigned long prime = 3);

} // namespace qeta
