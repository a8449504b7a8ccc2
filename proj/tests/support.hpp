#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "qeta/series.hpp"

namespace qeta::testing {

inline std::mt19937_64& rng()
{
    static std::mt19937_64 engine(0x5eed'2025'0001ULL);
    return engine;
}

inline TruncatedSeries random_series(std::size_t precision, long lo = -50, long hi = 50,
                                     std::optional<std::uint64_t> modulus = std::nullopt)
{
    std::uniform_int_distribution<long> dist(lo, hi);
    std::vector<mpz_class> c(precision);
    for (auto& x : c) {
        x = dist(rng());
    }
    TruncatedSeries s(std::move(c));
    return modulus ? reduce_mod(s, *modulus) : s;
}

/// Series with constant term 1, so it is a unit.
inline TruncatedSeries random_unit(std::size_t precision)
{
    std::vector<mpz_class> c(precision);
    std::uniform_int_distribution<long> dist(-9, 9);
    c[0] = 1;
    for (std::size_t i = 1; i < precision; ++i) {
        c[i] = dist(rng());
    }
    return TruncatedSeries(std::move(c));
}

/// Partitions of n in which even parts come in `even_colors` colors, by
/// walking every multiset of (part, color) kinds in non-increasing order.
inline std::uint64_t count_partitions(int n, int even_colors)
{
    std::vector<int> kinds;
    for (int part = 1; part <= n; ++part) {
        for (int c = 0; c < (part % 2 == 0 ? even_colors : 1); ++c) {
            kinds.push_back(part);
        }
    }
    std::function<std::uint64_t(int, std::size_t)> walk = [&](int rest, std::size_t limit) -> std::uint64_t {
        if (rest == 0) {
            return 1;
        }
        std::uint64_t total = 0;
        for (std::size_t k = 0; k < limit; ++k) {
            if (kinds[k] <= rest) {
                total += walk(rest - kinds[k], k + 1);
            }
        }
        return total;
    };
    return walk(n, kinds.size());
}

} // namespace qeta::testing
