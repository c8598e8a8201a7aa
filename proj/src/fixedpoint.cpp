#include "hankel/fixedpoint.hpp"

#include <cmath>
#include <stdexcept>

namespace hankel {

namespace detail {

void round_shift_even(mpz_class& m, unsigned long shift) {
    if (shift == 0 || m == 0) return;
    const bool neg = sgn(m) < 0;
    if (neg) mpz_neg(m.get_mpz_t(), m.get_mpz_t());
    const bool half_bit = mpz_tstbit(m.get_mpz_t(), shift - 1);
    // Exact half iff the lowest set bit is precisely the half bit.
    const bool exact_half =
        half_bit && mpz_scan1(m.get_mpz_t(), 0) == shift - 1;
    mpz_tdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), shift);
    if (half_bit && (!exact_half || mpz_odd_p(m.get_mpz_t()))) {
        mpz_add_ui(m.get_mpz_t(), m.get_mpz_t(), 1);
    }
    if (neg) mpz_neg(m.get_mpz_t(), m.get_mpz_t());
}

mpz_class div_round_even(const mpz_class& num, const mpz_class& den) {
    mpz_class n = abs(num);
    mpz_class d = abs(den);
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    r <<= 1;
    const int c = cmp(r, d);
    if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) ++q;
    if ((sgn(num) < 0) != (sgn(den) < 0)) mpz_neg(q.get_mpz_t(), q.get_mpz_t());
    return q;
}

} // namespace detail

FixScalar::FixScalar(mpz_class mantissa, long frac_bits)
    : mant_(std::move(mantissa)), frac_bits_(frac_bits) {
    if (frac_bits < 0) throw std::invalid_argument("frac_bits must be >= 0");
}

FixScalar FixScalar::from_integer(long n, long frac_bits) {
    if (frac_bits < 0) throw std::invalid_argument("frac_bits must be >= 0");
    mpz_class m(n);
    m <<= static_cast<unsigned long>(frac_bits);
    return FixScalar(std::move(m), frac_bits);
}

FixScalar FixScalar::operator-() const {
    return FixScalar(-mant_, frac_bits_);
}

FixScalar operator+(const FixScalar& a, const FixScalar& b) {
    if (a.frac_bits_ != b.frac_bits_)
        throw std::logic_error("fixed-point add: frac_bits mismatch");
    return FixScalar(a.mant_ + b.mant_, a.frac_bits_);
}

FixScalar operator-(const FixScalar& a, const FixScalar& b) {
    if (a.frac_bits_ != b.frac_bits_)
        throw std::logic_error("fixed-point sub: frac_bits mismatch");
    return FixScalar(a.mant_ - b.mant_, a.frac_bits_);
}

FixScalar operator*(const FixScalar& a, const FixScalar& b) {
    return FixScalar(a.mant_ * b.mant_, a.frac_bits_ + b.frac_bits_);
}

FixScalar FixScalar::div(const FixScalar& b, long out_frac_bits) const {
    if (b.mant_ == 0) throw std::domain_error("fixed-point div: zero divisor");
    if (out_frac_bits < 0) throw std::invalid_argument("frac_bits must be >= 0");
    // result mantissa = round(mant * 2^(out + b.frac - frac) / b.mant)
    const long e = out_frac_bits + b.frac_bits_ - frac_bits_;
    mpz_class num = mant_;
    mpz_class den = b.mant_;
    if (e >= 0) {
        num <<= static_cast<unsigned long>(e);
    } else {
        den <<= static_cast<unsigned long>(-e);
    }
    return FixScalar(detail::div_round_even(num, den), out_frac_bits);
}

FixScalar FixScalar::truncate(long new_frac_bits) const {
    if (new_frac_bits > frac_bits_ || new_frac_bits < 0)
        throw std::logic_error("fixed-point truncate: need 0 <= new frac_bits <= current");
    mpz_class m = mant_;
    detail::round_shift_even(m, static_cast<unsigned long>(frac_bits_ - new_frac_bits));
    return FixScalar(std::move(m), new_frac_bits);
}

FixScalar FixScalar::align(long new_frac_bits) const {
    if (new_frac_bits < frac_bits_)
        throw std::logic_error("fixed-point align: new frac_bits below current");
    mpz_class m = mant_;
    m <<= static_cast<unsigned long>(new_frac_bits - frac_bits_);
    return FixScalar(std::move(m), new_frac_bits);
}

double FixScalar::to_double() const {
    if (mant_ == 0) return 0.0;
    const bool neg = sgn(mant_) < 0;
    mpz_class a = abs(mant_);
    const size_t bits = mpz_sizeinbase(a.get_mpz_t(), 2);
    long exp2 = -frac_bits_;
    if (bits > 53) {
        const unsigned long s = static_cast<unsigned long>(bits - 53);
        detail::round_shift_even(a, s);
        exp2 += static_cast<long>(s);
    }
    // a now fits in 54 bits (2^53 at most after carry), so get_d is exact.
    const double d = std::ldexp(a.get_d(), static_cast<int>(exp2));
    if (std::isinf(d))
        throw std::overflow_error("fixed-point value exceeds binary64 range");
    return neg ? -d : d;
}

std::strong_ordering FixScalar::operator<=>(const FixScalar& other) const {
    int c;
    if (frac_bits_ == other.frac_bits_) {
        c = cmp(mant_, other.mant_);
    } else if (frac_bits_ < other.frac_bits_) {
        mpz_class lhs = mant_;
        lhs <<= static_cast<unsigned long>(other.frac_bits_ - frac_bits_);
        c = cmp(lhs, other.mant_);
    } else {
        mpz_class rhs = other.mant_;
        rhs <<= static_cast<unsigned long>(frac_bits_ - other.frac_bits_);
        c = cmp(mant_, rhs);
    }
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

bool FixScalar::operator==(const FixScalar& other) const {
    return (*this <=> other) == std::strong_ordering::equal;
}

std::string FixScalar::str() const {
    return mant_.get_str() + "/2^" + std::to_string(frac_bits_);
}

void submul_rounded(FixScalar& acc, const FixScalar& x, const FixScalar& y) {
    const long shift = x.frac_bits_ + y.frac_bits_ - acc.frac_bits_;
    if (shift < 0)
        throw std::logic_error("submul_rounded: product carries fewer frac bits than target");
    thread_local mpz_class prod;
    mpz_mul(prod.get_mpz_t(), x.mant_.get_mpz_t(), y.mant_.get_mpz_t());
    detail::round_shift_even(prod, static_cast<unsigned long>(shift));
    acc.mant_ -= prod;
}

} // namespace hankel
