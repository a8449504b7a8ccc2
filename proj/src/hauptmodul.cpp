#include "qeta/hauptmodul.hpp"

#include <algorithm>
#include <sstream>

#include "qeta/arith.hpp"

namespace qeta {

// ---------------------------------------------------------------------------
// HauptPolynomial

HauptPolynomial::HauptPolynomial(std::vector<mpq_class> coeffs)
    : coeffs_(std::move(coeffs))
{
    for (auto& c : coeffs_) {
        c.canonicalize();
    }
    trim();
}

HauptPolynomial HauptPolynomial::from_ints(std::initializer_list<long> coeffs)
{
    std::vector<mpq_class> v;
    for (long c : coeffs) {
        v.emplace_back(c);
    }
    return HauptPolynomial(std::move(v));
}

void HauptPolynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
}

mpq_class HauptPolynomial::coefficient(std::size_t j) const
{
    return j < coeffs_.size() ? coeffs_[j] : mpq_class(0);
}

bool HauptPolynomial::is_integral() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const mpq_class& c) { return c.get_den() == 1; });
}

std::string HauptPolynomial::to_string() const
{
    if (coeffs_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        const mpq_class& c = coeffs_[j];
        if (c == 0) {
            continue;
        }
        const bool negative = c < 0;
        os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
        const mpq_class mag = abs(c);
        if (j == 0) {
            os << mag;
        } else {
            if (mag != 1) {
                os << mag << "*";
            }
            os << "A";
            if (j > 1) {
                os << "^" << j;
            }
        }
        first = false;
    }
    return os.str();
}

HauptPolynomial operator+(const HauptPolynomial& a, const HauptPolynomial& b)
{
    std::vector<mpq_class> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = a.coefficient(j) + b.coefficient(j);
    }
    return HauptPolynomial(std::move(out));
}

HauptPolynomial operator-(const HauptPolynomial& a, const HauptPolynomial& b)
{
    std::vector<mpq_class> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = a.coefficient(j) - b.coefficient(j);
    }
    return HauptPolynomial(std::move(out));
}

HauptPolynomial operator*(const HauptPolynomial& a, const HauptPolynomial& b)
{
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    std::vector<mpq_class> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
            out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return HauptPolynomial(std::move(out));
}

HauptPolynomial operator*(const mpq_class& c, const HauptPolynomial& p)
{
    std::vector<mpq_class> out(p.coeffs_);
    for (auto& v : out) {
        v *= c;
    }
    return HauptPolynomial(std::move(out));
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

void require_normalized(const TruncatedSeries& a)
{
    if (!a.is_exact()) {
        throw DecompositionError("hauptmodul expansion must be exact");
    }
    if (a.precision() < 2 || a.coefficient(0) != 0 || a.coefficient(1) != 1) {
        throw DecompositionError("hauptmodul expansion must be q + O(q^2)");
    }
}

} // namespace

HauptmodulBasis::HauptmodulBasis(TruncatedSeries hauptmodul, std::size_t max_degree)
{
    require_normalized(hauptmodul);
    powers_.push_back(TruncatedSeries::one(hauptmodul.precision()));
    powers_.push_back(std::move(hauptmodul));
    while (powers_.size() <= max_degree) {
        powers_.push_back(ring_mul(powers_.back(), powers_[1]));
    }
}

const TruncatedSeries& HauptmodulBasis::power(std::size_t j)
{
    while (powers_.size() <= j) {
        powers_.push_back(ring_mul(powers_.back(), powers_[1]));
    }
    return powers_[j];
}

DecompositionResult HauptmodulBasis::decompose(const TruncatedSeries& g, std::size_t degree_bound)
{
    if (!g.is_exact()) {
        throw DecompositionError("decompose: target series must be exact");
    }
    const std::size_t n = std::min(g.precision(), precision());
    if (n <= degree_bound) {
        throw DecompositionError("decompose: precision " + std::to_string(n) + " does not exceed degree bound "
                                 + std::to_string(degree_bound));
    }
    std::vector<mpz_class> residual(g.integers().begin(), g.integers().begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<mpq_class> coeffs(degree_bound + 1);
    for (std::size_t j = 0; j <= degree_bound; ++j) {
        // A^j = q^j + ..., so the coefficient of q^j in the residual is c_j.
        const mpz_class c = residual[j];
        coeffs[j] = c;
        if (c == 0) {
            continue;
        }
        const auto basis = power(j).integers();
        for (std::size_t k = j; k < n; ++k) {
            mpz_submul(residual[k].get_mpz_t(), c.get_mpz_t(), basis[k].get_mpz_t());
        }
    }
    DecompositionResult result;
    result.checked_through = n;
    const auto bad = std::find_if(residual.begin(), residual.end(), [](const mpz_class& v) { return v != 0; });
    if (bad != residual.end()) {
        result.mismatch_exponent = static_cast<std::size_t>(bad - residual.begin());
        return result;
    }
    result.polynomial = HauptPolynomial(std::move(coeffs));
    return result;
}

TruncatedSeries HauptmodulBasis::evaluate(const HauptPolynomial& p)
{
    const std::size_t n = precision();
    if (p.is_zero()) {
        return TruncatedSeries(n);
    }
    mpz_class denom = 1;
    for (const auto& c : p.coefficients()) {
        mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), c.get_den_mpz_t());
    }
    std::vector<mpz_class> acc(n);
    for (std::size_t j = 0; j < p.coefficients().size(); ++j) {
        const mpq_class scaled_q = p.coefficients()[j] * denom;
        const mpz_class scaled = scaled_q.get_num();
        if (scaled == 0) {
            continue;
        }
        const auto basis = power(j).integers();
        for (std::size_t k = 0; k < n; ++k) {
            mpz_addmul(acc[k].get_mpz_t(), scaled.get_mpz_t(), basis[k].get_mpz_t());
        }
    }
    if (denom != 1) {
        for (auto& v : acc) {
            if (mpz_divisible_p(v.get_mpz_t(), denom.get_mpz_t()) == 0) {
                throw std::domain_error("evaluate_poly: polynomial does not evaluate to an integral series");
            }
            mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), denom.get_mpz_t());
        }
    }
    return TruncatedSeries(std::move(acc));
}

DecompositionResult decompose_in_hauptmodul(const TruncatedSeries& g, const TruncatedSeries& hauptmodul,
                                            std::size_t degree_bound)
{
    require_normalized(hauptmodul);
    if (!g.is_exact()) {
        throw DecompositionError("decompose: target series must be exact");
    }
    if (std::min(g.precision(), hauptmodul.precision()) <= degree_bound) {
        throw DecompositionError("decompose: precision does not exceed degree bound");
    }
    HauptmodulBasis basis(hauptmodul, 1);
    return basis.decompose(g, degree_bound);
}

TruncatedSeries evaluate_poly(const HauptPolynomial& p, const TruncatedSeries& hauptmodul)
{
    HauptmodulBasis basis(hauptmodul, 1);
    return basis.evaluate(p);
}

// ---------------------------------------------------------------------------
// Valence bound and identity checks

std::size_t rigorous_pole_bound(const CuspOrderTable& lower_bounds)
{
    std::size_t total = 0;
    for (const auto& e : lower_bounds.entries) {
        mpz_class ceil_order;
        mpz_cdiv_q(ceil_order.get_mpz_t(), e.order.get_num_mpz_t(), e.order.get_den_mpz_t());
        if (ceil_order < 0) {
            const mpz_class poles = -ceil_order * e.cusp.multiplicity;
            total += poles.get_ui();
        }
    }
    return total + 1;
}

VerificationReport verify_identity_rigorous(const TruncatedSeries& lhs, const TruncatedSeries& rhs, std::size_t bound)
{
    if (lhs.precision() < bound || rhs.precision() < bound) {
        throw std::invalid_argument("verify_identity_rigorous: precision below the required bound "
                                    + std::to_string(bound));
    }
    if (lhs.modulus() != rhs.modulus()) {
        throw ModulusMismatch("verify_identity_rigorous: modulus mismatch");
    }
    VerificationReport report;
    report.task = "identity to " + std::to_string(bound) + " coefficients";
    report.checked = bound;
    for (std::size_t n = 0; n < bound; ++n) {
        const mpz_class a = lhs.coefficient(n);
        const mpz_class b = rhs.coefficient(n);
        if (a != b) {
            report.record_violation(n, "lhs " + a.get_str() + " != rhs " + b.get_str());
            break;
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Newton identities

SigmaTriple sigma_from_power_sums(const HauptPolynomial& p1, const HauptPolynomial& p2, const HauptPolynomial& p3)
{
    SigmaTriple s;
    s.sigma1 = p1;
    s.sigma2 = mpq_class(1, 2) * (s.sigma1 * p1 - p2);
    s.sigma3 = mpq_class(1, 3) * (s.sigma2 * p1 - s.sigma1 * p2 + p3);
    s.integral = s.sigma1.is_integral() && s.sigma2.is_integral() && s.sigma3.is_integral();
    return s;
}

namespace {

HauptPolynomial recurrence_step(const SigmaTriple& sigma, const HauptPolynomial& prev1, const HauptPolynomial& prev2,
                                const HauptPolynomial& prev3)
{
    return sigma.sigma1 * prev1 - sigma.sigma2 * prev2 + sigma.sigma3 * prev3;
}

} // namespace

VerificationReport newton_recurrence_check(std::size_t i_max, const SigmaTriple& sigma,
                                           std::span<const HauptPolynomial> seq, const std::string& label)
{
    VerificationReport report;
    report.task = "newton recurrence for " + label;
    if (i_max >= 4 && seq.size() < i_max + 1) {
        throw std::invalid_argument("newton_recurrence_check: need terms 1.." + std::to_string(i_max));
    }
    for (std::size_t i = 4; i <= i_max; ++i) {
        const HauptPolynomial predicted = recurrence_step(sigma, seq[i - 1], seq[i - 2], seq[i - 3]);
        ++report.checked;
        if (!(predicted == seq[i])) {
            report.record_violation(i, "difference " + (seq[i] - predicted).to_string());
            break;
        }
    }
    return report;
}

void extend_by_recurrence(const SigmaTriple& sigma, std::vector<HauptPolynomial>& seq, std::size_t n)
{
    if (seq.size() < 4) {
        throw std::invalid_argument("extend_by_recurrence: need terms 0..3");
    }
    while (seq.size() <= n) {
        const std::size_t i = seq.size();
        seq.push_back(recurrence_step(sigma, seq[i - 1], seq[i - 2], seq[i - 3]));
    }
}

ValuationTable coefficient_valuations(std::span<const HauptPolynomial> polys, unsigned long prime)
{
    ValuationTable table;
    table.prime = prime;
    for (const auto& p : polys) {
        std::optional<unsigned long> best;
        for (const auto& c : p.coefficients()) {
            if (c.get_den() != 1) {
                throw std::domain_error("coefficient_valuations: non-integral coefficient " + c.get_str());
            }
            const auto v = p_adic_valuation(c.get_num(), prime);
            if (v && (!best || *v < *best)) {
                best = v;
            }
        }
        table.min_valuation.push_back(best);
    }
    return table;
}

} // namespace qeta
