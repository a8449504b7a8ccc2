#include "qeta/series.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <utility>

#include "qeta/arith.hpp"

namespace qeta {

using IntVec = std::vector<mpz_class>;
using ResVec = std::vector<std::uint64_t>;

class SeriesAccess {
public:
    static TruncatedSeries make_exact(IntVec coeffs)
    {
        return TruncatedSeries(std::move(coeffs));
    }

    // `residues` must already lie in [0, modulus).
    static TruncatedSeries make_reduced(ResVec residues, std::uint64_t modulus)
    {
        TruncatedSeries out;
        out.coeffs_ = std::move(residues);
        out.modulus_ = modulus;
        return out;
    }

    static const IntVec& ints(const TruncatedSeries& f) { return std::get<IntVec>(f.coeffs_); }
    static const ResVec& res(const TruncatedSeries& f) { return std::get<ResVec>(f.coeffs_); }
};

namespace {

__extension__ using u128 = unsigned __int128;

void check_modulus_value(std::uint64_t m)
{
    if (m == 0 || m > max_residue_modulus) {
        throw std::invalid_argument("modulus must lie in [1, 2^32], got " + std::to_string(m));
    }
}

void require_compatible(const TruncatedSeries& f, const TruncatedSeries& g)
{
    if (f.modulus() != g.modulus()) {
        auto describe = [](const TruncatedSeries& s) {
            return s.modulus() ? "mod " + std::to_string(*s.modulus()) : std::string("exact");
        };
        throw ModulusMismatch("series modulus mismatch: " + describe(f) + " vs " + describe(g));
    }
}

// How many products of two residues can be summed onto a reduced value
// before a 64-bit accumulator may overflow.
std::uint64_t safe_accumulations(std::uint64_t m)
{
    if (m <= 1) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    const std::uint64_t top = (m - 1) * (m - 1);
    return (std::numeric_limits<std::uint64_t>::max() - (m - 1)) / top;
}

std::vector<std::size_t> nonzero_indices(const TruncatedSeries& f, std::size_t from, std::size_t until)
{
    std::vector<std::size_t> idx;
    if (f.is_exact()) {
        const auto& c = SeriesAccess::ints(f);
        for (std::size_t k = from; k < until; ++k) {
            if (c[k] != 0) {
                idx.push_back(k);
            }
        }
    } else {
        const auto& c = SeriesAccess::res(f);
        for (std::size_t k = from; k < until; ++k) {
            if (c[k] != 0) {
                idx.push_back(k);
            }
        }
    }
    return idx;
}

IntVec mul_exact(const IntVec& a, const IntVec& b, std::size_t n)
{
    IntVec r(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0) {
            continue;
        }
        mpz_srcptr ai = a[i].get_mpz_t();
        for (std::size_t j = 0; j + i < n; ++j) {
            if (b[j] != 0) {
                mpz_addmul(r[i + j].get_mpz_t(), ai, b[j].get_mpz_t());
            }
        }
    }
    return r;
}

ResVec mul_residue(const ResVec& a, const ResVec& b, std::size_t n, std::uint64_t m)
{
    ResVec r(n, 0);
    const std::uint64_t budget = safe_accumulations(m);
    std::uint64_t pending = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t ai = a[i];
        if (ai == 0) {
            continue;
        }
        if (pending == budget) {
            for (auto& v : r) {
                v %= m;
            }
            pending = 0;
        }
        for (std::size_t j = 0; j + i < n; ++j) {
            r[i + j] += ai * b[j];
        }
        ++pending;
    }
    for (auto& v : r) {
        v %= m;
    }
    return r;
}

std::size_t count_nonzero(const TruncatedSeries& f, std::size_t n)
{
    return nonzero_indices(f, 0, n).size();
}

} // namespace

// ---------------------------------------------------------------------------
// TruncatedSeries

TruncatedSeries::TruncatedSeries(std::size_t precision, std::optional<std::uint64_t> modulus)
    : modulus_(modulus)
{
    if (precision < 1) {
        throw std::invalid_argument("series precision must be at least 1");
    }
    if (modulus_) {
        check_modulus_value(*modulus_);
        coeffs_ = ResVec(precision, 0);
    } else {
        coeffs_ = IntVec(precision);
    }
}

TruncatedSeries::TruncatedSeries(std::vector<mpz_class> coeffs)
{
    if (coeffs.empty()) {
        throw std::invalid_argument("series precision must be at least 1");
    }
    coeffs_ = std::move(coeffs);
}

TruncatedSeries TruncatedSeries::from_ints(std::initializer_list<long> coeffs, std::size_t precision)
{
    IntVec v(std::max(precision, coeffs.size()));
    std::size_t k = 0;
    for (long c : coeffs) {
        v[k++] = c;
    }
    return TruncatedSeries(std::move(v));
}

TruncatedSeries TruncatedSeries::from_residues(std::vector<std::uint64_t> residues, std::uint64_t modulus)
{
    check_modulus_value(modulus);
    if (residues.empty()) {
        throw std::invalid_argument("series precision must be at least 1");
    }
    for (auto& v : residues) {
        v %= modulus;
    }
    return SeriesAccess::make_reduced(std::move(residues), modulus);
}

TruncatedSeries TruncatedSeries::one(std::size_t precision, std::optional<std::uint64_t> modulus)
{
    return monomial(1, 0, precision, modulus);
}

TruncatedSeries TruncatedSeries::monomial(const mpz_class& c, std::size_t k, std::size_t precision,
                                          std::optional<std::uint64_t> modulus)
{
    if (k >= precision) {
        return TruncatedSeries(precision, modulus);
    }
    if (modulus) {
        check_modulus_value(*modulus);
        ResVec v(precision, 0);
        mpz_class r;
        mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), *modulus);
        v[k] = r.get_ui();
        return SeriesAccess::make_reduced(std::move(v), *modulus);
    }
    IntVec v(precision);
    v[k] = c;
    return TruncatedSeries(std::move(v));
}

std::size_t TruncatedSeries::precision() const noexcept
{
    return std::visit([](const auto& v) { return v.size(); }, coeffs_);
}

mpz_class TruncatedSeries::coefficient(std::size_t n) const
{
    if (n >= precision()) {
        throw std::out_of_range("coefficient index " + std::to_string(n) + " beyond precision "
                                + std::to_string(precision()));
    }
    if (modulus_) {
        return mpz_class(static_cast<unsigned long>(std::get<ResVec>(coeffs_)[n]));
    }
    return std::get<IntVec>(coeffs_)[n];
}

std::span<const mpz_class> TruncatedSeries::integers() const
{
    if (modulus_) {
        throw std::logic_error("integers() called on a reduced series");
    }
    return std::get<IntVec>(coeffs_);
}

std::span<const std::uint64_t> TruncatedSeries::residues() const
{
    if (!modulus_) {
        throw std::logic_error("residues() called on an exact series");
    }
    return std::get<ResVec>(coeffs_);
}

bool TruncatedSeries::is_zero() const
{
    return series_valuation(*this).is_zero();
}

TruncatedSeries TruncatedSeries::truncated(std::size_t n) const
{
    if (n < 1 || n > precision()) {
        throw std::invalid_argument("truncated: length must lie in [1, precision]");
    }
    if (modulus_) {
        const auto& v = std::get<ResVec>(coeffs_);
        return SeriesAccess::make_reduced(ResVec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)), *modulus_);
    }
    const auto& v = std::get<IntVec>(coeffs_);
    return TruncatedSeries(IntVec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)));
}

TruncatedSeries TruncatedSeries::shifted_up(std::size_t k) const
{
    if (modulus_) {
        const auto& v = std::get<ResVec>(coeffs_);
        ResVec out(k, 0);
        out.insert(out.end(), v.begin(), v.end());
        return SeriesAccess::make_reduced(std::move(out), *modulus_);
    }
    const auto& v = std::get<IntVec>(coeffs_);
    IntVec out(k);
    out.insert(out.end(), v.begin(), v.end());
    return TruncatedSeries(std::move(out));
}

TruncatedSeries TruncatedSeries::shifted_down(std::size_t k) const
{
    if (k >= precision()) {
        throw std::invalid_argument("shifted_down: shift must be smaller than the precision");
    }
    for (std::size_t n = 0; n < k; ++n) {
        if (coefficient(n) != 0) {
            throw std::domain_error("shifted_down: nonzero coefficient below the shift");
        }
    }
    if (modulus_) {
        const auto& v = std::get<ResVec>(coeffs_);
        return SeriesAccess::make_reduced(ResVec(v.begin() + static_cast<std::ptrdiff_t>(k), v.end()), *modulus_);
    }
    const auto& v = std::get<IntVec>(coeffs_);
    return TruncatedSeries(IntVec(v.begin() + static_cast<std::ptrdiff_t>(k), v.end()));
}

TruncatedSeries TruncatedSeries::scaled(const mpz_class& c) const
{
    if (modulus_) {
        const std::uint64_t m = *modulus_;
        mpz_class cr;
        mpz_fdiv_r_ui(cr.get_mpz_t(), c.get_mpz_t(), m);
        const std::uint64_t cm = cr.get_ui();
        ResVec out = std::get<ResVec>(coeffs_);
        for (auto& v : out) {
            v = (v * cm) % m;
        }
        return SeriesAccess::make_reduced(std::move(out), m);
    }
    IntVec out = std::get<IntVec>(coeffs_);
    for (auto& v : out) {
        v *= c;
    }
    return TruncatedSeries(std::move(out));
}

std::string TruncatedSeries::to_string(std::size_t max_terms) const
{
    std::ostringstream os;
    std::size_t shown = 0;
    bool truncated_listing = false;
    for (std::size_t n = 0; n < precision(); ++n) {
        mpz_class c = coefficient(n);
        if (c == 0) {
            continue;
        }
        if (shown == max_terms) {
            truncated_listing = true;
            break;
        }
        const bool negative = c < 0;
        if (shown == 0) {
            os << (negative ? "-" : "");
        } else {
            os << (negative ? " - " : " + ");
        }
        mpz_class mag = abs(c);
        if (n == 0) {
            os << mag;
        } else {
            if (mag != 1) {
                os << mag << "*";
            }
            os << "q";
            if (n > 1) {
                os << "^" << n;
            }
        }
        ++shown;
    }
    if (shown == 0) {
        os << "0";
    }
    if (truncated_listing) {
        os << " + ...";
    }
    os << " + O(q^" << precision() << ")";
    if (modulus_) {
        os << " (mod " << *modulus_ << ")";
    }
    return os.str();
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b)
{
    return a.modulus_ == b.modulus_ && a.coeffs_ == b.coeffs_;
}

// ---------------------------------------------------------------------------
// Ring operations

TruncatedSeries ring_add(const TruncatedSeries& f, const TruncatedSeries& g, int sign)
{
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("ring_add: sign must be +1 or -1");
    }
    require_compatible(f, g);
    const std::size_t n = std::min(f.precision(), g.precision());
    if (f.modulus()) {
        const std::uint64_t m = *f.modulus();
        const auto& a = SeriesAccess::res(f);
        const auto& b = SeriesAccess::res(g);
        ResVec out(n);
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = sign > 0 ? (a[k] + b[k]) % m : (a[k] + (m - b[k])) % m;
        }
        return SeriesAccess::make_reduced(std::move(out), m);
    }
    const auto& a = SeriesAccess::ints(f);
    const auto& b = SeriesAccess::ints(g);
    IntVec out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (sign > 0) {
            mpz_add(out[k].get_mpz_t(), a[k].get_mpz_t(), b[k].get_mpz_t());
        } else {
            mpz_sub(out[k].get_mpz_t(), a[k].get_mpz_t(), b[k].get_mpz_t());
        }
    }
    return SeriesAccess::make_exact(std::move(out));
}

TruncatedSeries ring_mul(const TruncatedSeries& f, const TruncatedSeries& g)
{
    require_compatible(f, g);
    const std::size_t n = std::min(f.precision(), g.precision());
    // The outer loop skips zero coefficients, so put the sparser factor there.
    const bool swap = count_nonzero(g, n) < count_nonzero(f, n);
    const TruncatedSeries& outer = swap ? g : f;
    const TruncatedSeries& inner = swap ? f : g;
    if (f.modulus()) {
        return SeriesAccess::make_reduced(
            mul_residue(SeriesAccess::res(outer), SeriesAccess::res(inner), n, *f.modulus()), *f.modulus());
    }
    return SeriesAccess::make_exact(mul_exact(SeriesAccess::ints(outer), SeriesAccess::ints(inner), n));
}

TruncatedSeries ring_invert(const TruncatedSeries& f)
{
    const std::size_t n = f.precision();
    const auto support = nonzero_indices(f, 1, n);
    if (f.modulus()) {
        const std::uint64_t m = *f.modulus();
        const auto& a = SeriesAccess::res(f);
        std::uint64_t inv0 = 0;
        try {
            inv0 = static_cast<std::uint64_t>(modular_inverse(static_cast<std::int64_t>(a[0]),
                                                              static_cast<std::int64_t>(m)));
        } catch (const std::domain_error&) {
            throw NonUnitError("ring_invert: constant term " + std::to_string(a[0]) + " is not a unit mod "
                               + std::to_string(m));
        }
        ResVec g(n, 0);
        g[0] = inv0 % m;
        for (std::size_t k = 1; k < n; ++k) {
            u128 acc = 0;
            for (std::size_t j : support) {
                if (j > k) {
                    break;
                }
                acc += static_cast<u128>(a[j]) * g[k - j];
            }
            const std::uint64_t s = static_cast<std::uint64_t>(acc % m);
            g[k] = static_cast<std::uint64_t>((static_cast<u128>(m - s) % m * inv0) % m);
        }
        return SeriesAccess::make_reduced(std::move(g), m);
    }
    const auto& a = SeriesAccess::ints(f);
    if (a[0] != 1 && a[0] != -1) {
        throw NonUnitError("ring_invert: constant term " + a[0].get_str() + " is not +-1");
    }
    const bool negate = a[0] < 0;
    IntVec g(n);
    g[0] = a[0];
    mpz_class acc;
    for (std::size_t k = 1; k < n; ++k) {
        acc = 0;
        for (std::size_t j : support) {
            if (j > k) {
                break;
            }
            mpz_addmul(acc.get_mpz_t(), a[j].get_mpz_t(), g[k - j].get_mpz_t());
        }
        // g_k = -a_0^{-1} * acc, and a_0^{-1} == a_0 for a_0 = +-1.
        if (negate) {
            g[k] = acc;
        } else {
            mpz_neg(g[k].get_mpz_t(), acc.get_mpz_t());
        }
    }
    return SeriesAccess::make_exact(std::move(g));
}

TruncatedSeries ring_pow(const TruncatedSeries& f, unsigned long e)
{
    TruncatedSeries result = TruncatedSeries::one(f.precision(), f.modulus());
    if (e == 0) {
        return result;
    }
    TruncatedSeries base = f;
    bool have_result = false;
    while (true) {
        if (e & 1UL) {
            result = have_result ? ring_mul(result, base) : base;
            have_result = true;
        }
        e >>= 1;
        if (e == 0) {
            break;
        }
        base = ring_mul(base, base);
    }
    return result;
}

namespace {

// prod_{n>=1} (1 - q^n) to `precision` terms by Euler's pentagonal theorem.
TruncatedSeries pentagonal_series(std::size_t precision, std::optional<std::uint64_t> modulus)
{
    IntVec v(precision);
    v[0] = 1;
    for (std::size_t k = 1;; ++k) {
        const std::size_t lo = k * (3 * k - 1) / 2;
        const std::size_t hi = k * (3 * k + 1) / 2;
        if (lo >= precision) {
            break;
        }
        const long sign = (k % 2 == 1) ? -1 : 1;
        v[lo] = sign;
        if (hi < precision) {
            v[hi] = sign;
        }
    }
    TruncatedSeries exact(std::move(v));
    return modulus ? reduce_mod(exact, *modulus) : exact;
}

} // namespace

TruncatedSeries eta_product_series(std::int64_t delta, std::int64_t exponent, std::size_t precision,
                                   std::optional<std::uint64_t> modulus)
{
    if (delta < 1) {
        throw std::invalid_argument("eta_product_series: delta must be positive");
    }
    if (precision < 1) {
        throw std::invalid_argument("eta_product_series: precision must be at least 1");
    }
    if (exponent == 0) {
        return TruncatedSeries::one(precision, modulus);
    }
    const auto d = static_cast<std::size_t>(delta);
    const std::size_t base_precision = (precision + d - 1) / d;
    TruncatedSeries base = pentagonal_series(base_precision, modulus);
    if (exponent < 0) {
        base = ring_invert(base);
    }
    const auto magnitude = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
    TruncatedSeries powered = magnitude == 1 ? base : ring_pow(base, magnitude);
    return dilate(powered, d, precision);
}

TruncatedSeries dilate(const TruncatedSeries& f, std::size_t m, std::optional<std::size_t> bound)
{
    if (m < 1) {
        throw std::invalid_argument("dilate: factor must be positive");
    }
    std::size_t n = m * f.precision();
    if (bound) {
        if (*bound < 1) {
            throw std::invalid_argument("dilate: bound must be at least 1");
        }
        n = std::min(n, *bound);
    }
    if (f.modulus()) {
        const auto& a = SeriesAccess::res(f);
        ResVec out(n, 0);
        for (std::size_t k = 0; k * m < n; ++k) {
            out[k * m] = a[k];
        }
        return SeriesAccess::make_reduced(std::move(out), *f.modulus());
    }
    const auto& a = SeriesAccess::ints(f);
    IntVec out(n);
    for (std::size_t k = 0; k * m < n; ++k) {
        out[k * m] = a[k];
    }
    return SeriesAccess::make_exact(std::move(out));
}

TruncatedSeries u_p(const TruncatedSeries& f, std::uint64_t p)
{
    if (p < 2) {
        throw std::invalid_argument("u_p: p must be at least 2");
    }
    const std::size_t n = (f.precision() - 1) / p + 1;
    if (f.modulus()) {
        const auto& a = SeriesAccess::res(f);
        ResVec out(n);
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = a[k * p];
        }
        return SeriesAccess::make_reduced(std::move(out), *f.modulus());
    }
    const auto& a = SeriesAccess::ints(f);
    IntVec out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = a[k * p];
    }
    return SeriesAccess::make_exact(std::move(out));
}

TruncatedSeries reduce_mod(const TruncatedSeries& f, std::uint64_t m)
{
    check_modulus_value(m);
    if (f.modulus()) {
        if (*f.modulus() % m != 0) {
            throw ModulusMismatch("reduce_mod: existing modulus " + std::to_string(*f.modulus())
                                  + " is not divisible by " + std::to_string(m));
        }
        ResVec out(SeriesAccess::res(f));
        for (auto& v : out) {
            v %= m;
        }
        return SeriesAccess::make_reduced(std::move(out), m);
    }
    const auto& a = SeriesAccess::ints(f);
    ResVec out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        out[k] = mpz_fdiv_ui(a[k].get_mpz_t(), m);
    }
    return SeriesAccess::make_reduced(std::move(out), m);
}

SeriesValuation series_valuation(const TruncatedSeries& f)
{
    const auto idx = nonzero_indices(f, 0, f.precision());
    if (idx.empty()) {
        return {};
    }
    return {idx.front()};
}

} // namespace qeta
