#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

namespace hankel {

/// Signed fixed-point scalar: an arbitrary-precision integer mantissa with a
/// per-value number of fractional bits F. The represented value is
/// mantissa / 2^F.
///
/// Arithmetic contract:
///   * add/sub require identical frac_bits and are exact (alignment is an
///     explicit operation, see align()).
///   * mul is exact; the result carries the sum of the operands' frac_bits.
///   * div and truncate are the only rounding operations; both round to
///     nearest with ties to even.
///
/// Values are immutable in practice (operations return fresh results) and
/// safe to share across threads once constructed.
class FixScalar {
public:
    FixScalar() = default; // zero at frac_bits 0

    FixScalar(mpz_class mantissa, long frac_bits);

    static FixScalar from_integer(long n, long frac_bits);

    long frac_bits() const noexcept { return frac_bits_; }
    const mpz_class& mantissa() const noexcept { return mant_; }
    int sign() const noexcept { return sgn(mant_); }
    bool is_zero() const noexcept { return mant_ == 0; }

    FixScalar operator-() const;
    friend FixScalar operator+(const FixScalar& a, const FixScalar& b);
    friend FixScalar operator-(const FixScalar& a, const FixScalar& b);
    friend FixScalar operator*(const FixScalar& a, const FixScalar& b);

    /// Rounded quotient at out_frac_bits fractional bits.
    FixScalar div(const FixScalar& b, long out_frac_bits) const;

    /// Reduce fractional bits (new_frac_bits <= frac_bits), rounding to
    /// nearest-even. The value changes by at most 2^-(new_frac_bits+1).
    FixScalar truncate(long new_frac_bits) const;

    /// Raise fractional bits (new_frac_bits >= frac_bits); always exact.
    FixScalar align(long new_frac_bits) const;

    /// Nearest binary64 to the exact value; throws std::overflow_error if the
    /// magnitude exceeds the double range.
    double to_double() const;

    /// Exact value comparison (operands need not share frac_bits).
    std::strong_ordering operator<=>(const FixScalar& other) const;
    bool operator==(const FixScalar& other) const;

    std::string str() const; // "mantissa/2^F", for diagnostics

    friend void submul_rounded(FixScalar& acc, const FixScalar& x, const FixScalar& y);

private:
    mpz_class mant_{0};
    long frac_bits_ = 0;
};

/// Fused update used by the elimination kernels:
///   acc -= round_nearest_even(x*y reduced to acc.frac_bits)
/// Requires x.frac_bits + y.frac_bits >= acc.frac_bits. Exactly one rounding.
void submul_rounded(FixScalar& acc, const FixScalar& x, const FixScalar& y);

namespace detail {

/// In-place m <- round_nearest_even(m / 2^shift).
void round_shift_even(mpz_class& m, unsigned long shift);

/// round_nearest_even(num / den); den must be nonzero.
mpz_class div_round_even(const mpz_class& num, const mpz_class& den);

} // namespace detail

} // namespace hankel
