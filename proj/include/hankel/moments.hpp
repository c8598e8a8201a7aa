#pragma once

#include "hankel/fixedpoint.hpp"

#include <vector>

namespace hankel {

/// Weight w(x) = exp(-x^beta) on [0, inf). beta = beta_num/beta_den is
/// restricted so that 2*beta_den/beta_num is a positive integer; every gamma
/// argument (k+1)/beta is then an integer or half-integer and the moments are
/// exactly computable (beta = 1/2, 1, 2, 1/3, ... are all covered).
struct WeightSpec {
    unsigned beta_num = 1;
    unsigned beta_den = 2;

    /// q = 2*beta_den/beta_num, so (k+1)/beta = (k+1)*q/2 and 1/beta = q/2.
    unsigned long doubled_inverse() const;

    /// Throws std::invalid_argument unless 2*beta_den/beta_num is integral.
    static WeightSpec make(unsigned num, unsigned den);

    bool operator==(const WeightSpec&) const = default;
};

/// Gamma at an integer or half-integer argument arg_times_2/2, as a
/// fixed-point value with frac_bits fractional bits. Integer arguments are
/// factorials and exact; half-integer arguments use (2n)! sqrt(pi) / (4^n n!)
/// with sqrt(pi) carried at 64 guard bits before the final rounding.
FixScalar gamma_exact(unsigned long arg_times_2, long frac_bits);

/// mu_k = (1/beta) Gamma((k+1)/beta). Exact whenever beta = 1/m.
FixScalar moment(const WeightSpec& spec, unsigned long k, long frac_bits);

/// The 2n-1 moments mu_0..mu_{2n-2} plus the Hankel view H[i][j] = mu[i+j].
class MomentTable {
public:
    MomentTable(WeightSpec spec, int n, long frac_bits);

    int order() const noexcept { return n_; }
    long frac_bits() const noexcept { return frac_bits_; }
    const WeightSpec& weight() const noexcept { return spec_; }

    const FixScalar& mu(size_t k) const { return mu_.at(k); }
    const FixScalar& entry(int i, int j) const { return mu_.at(size_t(i) + size_t(j)); }

    /// Diagonal-and-below part of column j (rows j..n-1), aligned to the
    /// requested working precision. Exact: alignment only shifts mantissas.
    std::vector<FixScalar> working_column(int j, long working_frac_bits) const;

private:
    WeightSpec spec_;
    int n_;
    long frac_bits_;
    std::vector<FixScalar> mu_;
};

MomentTable build_hankel(const WeightSpec& spec, int n, long frac_bits);

/// Order-of-magnitude conditioning report. lambda_max is approximated by the
/// largest diagonal entry (1/beta) Gamma((2n-1)/beta) and the condition number
/// by lambda_max / 0.1; both are returned as log2 values since the raw numbers
/// overflow binary64 long before the interesting problem sizes.
struct ConditionEstimate {
    double log2_lambda_max;
    double log2_cond;
};
ConditionEstimate condition_estimate(const WeightSpec& spec, int n);

namespace detail {

/// round(pi * 2^frac_bits), from a Machin arctangent expansion.
mpz_class pi_scaled(unsigned long frac_bits);

/// floor(sqrt(pi) * 2^frac_bits).
mpz_class sqrt_pi_scaled(unsigned long frac_bits);

} // namespace detail

} // namespace hankel
