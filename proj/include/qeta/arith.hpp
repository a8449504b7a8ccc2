#pragma once

// Small number-theory helpers shared by the series, eta-quotient and
// congruence modules. Inputs here are levels, divisors and moduli, so
// machine integers and trial division are enough.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace qeta {

/// Positive divisors of n in increasing order. Requires n >= 1.
std::vector<std::int64_t> divisors(std::int64_t n);

/// Prime factorization as (prime, exponent) pairs, primes increasing.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

std::int64_t euler_phi(std::int64_t n);

bool is_prime(std::int64_t n);

/// The reciprocal of a modulo m, in [0, m).
///
/// Computed with the extended Euclidean algorithm. Throws
/// std::domain_error when gcd(a, m) != 1 and std::invalid_argument when
/// m < 1. For m == 1 the answer is 0.
std::int64_t modular_inverse(std::int64_t a, std::int64_t m);

/// Exponent of the prime p in a nonzero integer; nullopt for zero.
std::optional<unsigned long> p_adic_valuation(const mpz_class& value, unsigned long p);

/// Exact integer power for small bases; throws std::overflow_error on overflow.
std::int64_t checked_pow(std::int64_t base, unsigned exponent);

} // namespace qeta
