#pragma once

/**
 * @file congruence.hpp
 * @brief Partition generating functions and the end-to-end verification
 *        suites: the cubic-partition identity, its 3-adic congruence family,
 *        Watson's 5-adic family for p(n), and a replay of the modular-function
 *        proof (orders, U_3 bounds, U(F) = 3A, Newton recurrences).
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "qeta/eta_quotient.hpp"
#include "qeta/hauptmodul.hpp"
#include "qeta/report.hpp"
#include "qeta/series.hpp"

namespace qeta {

inline constexpr std::size_t default_index_max = 30000;
/// 3^7: enough for every divisor 3^(alpha + delta(alpha)) with alpha <= 4 and beyond.
inline constexpr std::uint64_t theorem12_modulus = 2187;

/// F = eta(9z) eta(18z) / (eta(z) eta(2z)) on Gamma_0(18).
EtaQuotient cubic_F();
/// A = eta(3z)^4 eta(6z)^4 / (eta(z)^4 eta(2z)^4) on Gamma_0(6).
EtaQuotient hauptmodul_A();

/// sum p(n) q^n.
TruncatedSeries partition_series(std::size_t precision, std::optional<std::uint64_t> modulus = std::nullopt);
/// sum a(n) q^n = prod 1 / ((1 - q^n)(1 - q^{2n})).
TruncatedSeries cubic_partition_series(std::size_t precision, std::optional<std::uint64_t> modulus = std::nullopt);

/// Coefficients in progression * n + residue are claimed divisible by divisor.
struct CongruenceFamily {
    std::uint64_t base = 3;
    unsigned alpha = 1;
    std::uint64_t progression_modulus = 3;
    std::uint64_t residue = 2;
    std::uint64_t divisor = 3;

    /// a(3^alpha n + c_alpha) == 0 mod 3^(alpha + delta(alpha)), c_alpha = 8^{-1} mod 3^alpha,
    /// delta(alpha) = 1 for even alpha and 0 for odd alpha.
    static CongruenceFamily cubic(unsigned alpha);
    /// p(5^k n + r_k) == 0 mod 5^k, r_k = 24^{-1} mod 5^k.
    static CongruenceFamily watson(unsigned k);
};

/// Checks every index progression_modulus * n + residue <= index_max. The
/// series needs precision > index_max and must be exact or reduced modulo a
/// multiple of the divisor; otherwise std::invalid_argument.
VerificationReport verify_congruence_family(const TruncatedSeries& series, const CongruenceFamily& family,
                                            std::size_t index_max);

/// Cubic families alpha = 1..alpha_max on a(n) mod `modulus`.
std::vector<VerificationReport> verify_theorem_1_2(unsigned alpha_max, std::size_t index_max = default_index_max,
                                                   std::uint64_t modulus = theorem12_modulus);

/// Watson's family for k in 1..3 on p(n) mod 5^k.
VerificationReport verify_watson(unsigned k, std::size_t index_max = default_index_max);
/// Same check with a caller-supplied family (e.g. a deliberately wrong residue).
VerificationReport verify_watson(const CongruenceFamily& family, std::size_t index_max);

/// Right-hand side constant * prod_delta (q^delta; q^delta)^{r_delta}.
struct EtaProductRhs {
    long constant = 3;
    EtaExponents exponents{{1, -4}, {2, -4}, {3, 3}, {6, 3}};
};

/// Builds sum a(3n+2) q^n and the eta-product right-hand side and compares
/// them through `precision` terms. Requires precision >= 10.
VerificationReport verify_theorem_1_1(std::size_t precision, const EtaProductRhs& rhs = {});

/// Step-by-step replay of the modular-function proof that U(F) = 3A and
/// hence of the identity for sum a(3n+2) q^n. The returned reports are in
/// stage order; the first failing stage ends the replay.
std::vector<VerificationReport> replay_section_3(std::size_t precision = default_precision);

/// Polynomials in A for U(A^i) and U(F A^i), the Newton sigmas, and the
/// checks run on them.
struct NewtonReplay {
    std::size_t precision = 0;
    /// ua[i] = U(A^i) for 0 <= i <= i_max (ua[0] = 1).
    std::vector<HauptPolynomial> ua;
    /// ufa[i] = U(F A^i) for 0 <= i <= i_max.
    std::vector<HauptPolynomial> ufa;
    /// Degree bounds from the U_3 order bookkeeping, by i.
    std::vector<std::size_t> degree_bound_a;
    std::vector<std::size_t> degree_bound_fa;
    SigmaTriple sigma;
    std::vector<VerificationReport> reports;

    [[nodiscard]] bool passed() const;
};

/// Decomposes U(A^i) and U(F A^i) for 1 <= i <= i_max (i_max >= 3) from
/// q-expansions carried to `precision` terms after U_3, derives sigma1..3
/// from the power sums 3 U(A^k), and checks the recurrence for both
/// sequences.
NewtonReplay replay_newton(std::size_t i_max, std::size_t precision);

/// ValuationTable rows for ua[1..] and ufa[0..].
struct NewtonValuations {
    ValuationTable ua;  // rows i = 1..i_max
    ValuationTable ufa; // rows i = 0..i_max
};
NewtonValuations newton_valuations(const NewtonReplay& replay);

/// The depth-alpha generating functions as polynomials in A:
///   L_1 = U(F), L_{2k} = U(L_{2k-1}), L_{2k+1} = U(F L_{2k}),
/// where L_alpha = q * sum_n a(3^alpha n + c_alpha) q^n times
/// (q^3;q^3)(q^6;q^6) for odd alpha and (q;q)(q^2;q^2) for even alpha.
/// Terms of U(A^i), U(F A^i) beyond the replay are produced by the
/// Newton recurrence. Returns L_1 .. L_{alpha_max}.
std::vector<HauptPolynomial> depth_iterates(const NewtonReplay& replay, unsigned alpha_max);

/// Checks each L_alpha against sum a(3^alpha n + c_alpha) q^n built
/// directly from the cubic partition series, through `terms` coefficients.
VerificationReport verify_depth_iterates(const std::vector<HauptPolynomial>& iterates, std::size_t terms);

} // namespace qeta
