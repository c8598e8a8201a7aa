#include "hankel/moments.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace hankel {

namespace detail {

namespace {

// arctan(1/x) * 2^frac_bits, truncated termwise; the caller supplies guard
// bits to absorb the per-term truncation.
mpz_class arctan_recip_scaled(unsigned long x, unsigned long frac_bits) {
    mpz_class term = mpz_class(1) << frac_bits;
    term /= x;
    const unsigned long x2 = x * x;
    mpz_class sum = 0;
    for (unsigned long k = 0; term != 0; ++k) {
        mpz_class t = term / (2 * k + 1);
        if (k % 2 == 0) {
            sum += t;
        } else {
            sum -= t;
        }
        term /= x2;
    }
    return sum;
}

} // namespace

mpz_class pi_scaled(unsigned long frac_bits) {
    // pi = 16 atan(1/5) - 4 atan(1/239), with 64 guard bits.
    const unsigned long guard = 64;
    mpz_class p = 16 * arctan_recip_scaled(5, frac_bits + guard) -
                  4 * arctan_recip_scaled(239, frac_bits + guard);
    round_shift_even(p, guard);
    return p;
}

mpz_class sqrt_pi_scaled(unsigned long frac_bits) {
    mpz_class p = pi_scaled(2 * frac_bits);
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), p.get_mpz_t());
    return r;
}

namespace {

// sqrt(pi) is reused across every half-integer gamma evaluation of a run.
const mpz_class& cached_sqrt_pi(unsigned long frac_bits) {
    static std::mutex mu;
    static std::unordered_map<unsigned long, mpz_class> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(frac_bits);
    if (it == cache.end()) it = cache.emplace(frac_bits, sqrt_pi_scaled(frac_bits)).first;
    return it->second;
}

} // namespace

} // namespace detail

unsigned long WeightSpec::doubled_inverse() const {
    return 2ul * beta_den / beta_num;
}

WeightSpec WeightSpec::make(unsigned num, unsigned den) {
    if (num == 0 || den == 0)
        throw std::invalid_argument("beta must be positive");
    if ((2ul * den) % num != 0)
        throw std::invalid_argument("unsupported beta: 2/beta must be a positive integer");
    return WeightSpec{num, den};
}

FixScalar gamma_exact(unsigned long arg_times_2, long frac_bits) {
    if (arg_times_2 == 0) throw std::invalid_argument("gamma argument must be positive");
    if (frac_bits < 0) throw std::invalid_argument("frac_bits must be >= 0");
    if (arg_times_2 % 2 == 0) {
        // Gamma(n) = (n-1)!
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), arg_times_2 / 2 - 1);
        f <<= static_cast<unsigned long>(frac_bits);
        return FixScalar(std::move(f), frac_bits);
    }
    // Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!)
    const unsigned long n = (arg_times_2 - 1) / 2;
    const unsigned long guard = 64;
    mpz_class num;
    mpz_fac_ui(num.get_mpz_t(), 2 * n);
    num *= detail::cached_sqrt_pi(static_cast<unsigned long>(frac_bits) + guard);
    mpz_class den;
    mpz_fac_ui(den.get_mpz_t(), n);
    den <<= 2 * n + guard; // 4^n * 2^guard
    return FixScalar(detail::div_round_even(num, den), frac_bits);
}

FixScalar moment(const WeightSpec& spec, unsigned long k, long frac_bits) {
    const unsigned long q = spec.doubled_inverse();
    FixScalar g = gamma_exact((k + 1) * q, frac_bits);
    if (q % 2 == 0) {
        return FixScalar(g.mantissa() * (q / 2), frac_bits);
    }
    mpz_class m = g.mantissa() * q;
    detail::round_shift_even(m, 1);
    return FixScalar(std::move(m), frac_bits);
}

MomentTable::MomentTable(WeightSpec spec, int n, long frac_bits)
    : spec_(spec), n_(n), frac_bits_(frac_bits) {
    if (n < 1) throw std::invalid_argument("matrix order must be >= 1");
    mu_.reserve(size_t(2 * n - 1));
    for (unsigned long k = 0; k < size_t(2 * n - 1); ++k) {
        mu_.push_back(moment(spec_, k, frac_bits_));
    }
}

std::vector<FixScalar> MomentTable::working_column(int j, long working_frac_bits) const {
    std::vector<FixScalar> col;
    col.reserve(size_t(n_ - j));
    for (int i = j; i < n_; ++i) {
        col.push_back(entry(i, j).align(working_frac_bits));
    }
    return col;
}

MomentTable build_hankel(const WeightSpec& spec, int n, long frac_bits) {
    return MomentTable(spec, n, frac_bits);
}

ConditionEstimate condition_estimate(const WeightSpec& spec, int n) {
    if (n < 1) throw std::invalid_argument("matrix order must be >= 1");
    const double inv_beta = double(spec.beta_den) / double(spec.beta_num);
    const double arg = (2.0 * n - 1.0) * inv_beta;
    const double log2_lambda = (std::log(inv_beta) + std::lgamma(arg)) / std::numbers::ln2;
    return ConditionEstimate{log2_lambda, std::log2(10.0) + log2_lambda};
}

} // namespace hankel
