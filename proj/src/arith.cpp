#include "qeta/arith.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace qeta {

std::vector<std::int64_t> divisors(std::int64_t n)
{
    if (n < 1) {
        throw std::invalid_argument("divisors: n must be positive");
    }
    std::vector<std::int64_t> small;
    std::vector<std::int64_t> large;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) {
                large.push_back(n / d);
            }
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n)
{
    if (n < 1) {
        throw std::invalid_argument("factorize: n must be positive");
    }
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) {
            out.emplace_back(p, e);
        }
    }
    if (n > 1) {
        out.emplace_back(n, 1);
    }
    return out;
}

std::int64_t euler_phi(std::int64_t n)
{
    std::int64_t result = n;
    for (const auto& [p, e] : factorize(n)) {
        result = result / p * (p - 1);
    }
    return result;
}

bool is_prime(std::int64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

std::int64_t modular_inverse(std::int64_t a, std::int64_t m)
{
    if (m < 1) {
        throw std::invalid_argument("modular_inverse: modulus must be positive");
    }
    // Invariant: old_r == old_s * a (mod m), r == s * a (mod m).
    std::int64_t old_r = ((a % m) + m) % m;
    std::int64_t r = m;
    std::int64_t old_s = 1;
    std::int64_t s = 0;
    while (r != 0) {
        const std::int64_t quotient = old_r / r;
        old_r = std::exchange(r, old_r - quotient * r);
        old_s = std::exchange(s, old_s - quotient * s);
    }
    if (m == 1) {
        return 0;
    }
    if (old_r != 1) {
        throw std::domain_error("modular_inverse: " + std::to_string(a) + " is not invertible modulo "
                                + std::to_string(m));
    }
    return ((old_s % m) + m) % m;
}

std::optional<unsigned long> p_adic_valuation(const mpz_class& value, unsigned long p)
{
    if (p < 2) {
        throw std::invalid_argument("p_adic_valuation: p must be at least 2");
    }
    if (value == 0) {
        return std::nullopt;
    }
    mpz_class rest = abs(value);
    unsigned long v = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        ++v;
    }
    return v;
}

std::int64_t checked_pow(std::int64_t base, unsigned exponent)
{
    std::int64_t result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        if (base != 0 && std::abs(result) > std::numeric_limits<std::int64_t>::max() / std::abs(base)) {
            throw std::overflow_error("checked_pow: overflow");
        }
        result *= base;
    }
    return result;
}

} // namespace qeta
