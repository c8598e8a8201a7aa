#pragma once

// Exact-arithmetic reference implementations used only by tests. Everything
// here works in mpq rationals, independent of the fixed-point code paths it
// checks.

#include "hankel/fixedpoint.hpp"
#include "hankel/moments.hpp"

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

namespace oracle {

using Rat = mpq_class;
using RatMatrix = std::vector<std::vector<Rat>>;

inline Rat to_rational(const hankel::FixScalar& x) {
    mpz_class den = 1;
    den <<= static_cast<unsigned long>(x.frac_bits());
    Rat r(x.mantissa(), den);
    r.canonicalize();
    return r;
}

// |a| <= 2^-e
inline bool within_pow2(const Rat& a, long e) {
    Rat bound(1);
    if (e >= 0) {
        bound /= mpz_class(mpz_class(1) << static_cast<unsigned long>(e));
    } else {
        bound = mpz_class(mpz_class(1) << static_cast<unsigned long>(-e));
    }
    return cmp(abs(a), bound) <= 0;
}

// mu_k for beta = 1/2 is 2*(2k+1)!, for beta = 1 it is k!.
inline Rat moment_rational(const hankel::WeightSpec& w, unsigned long k) {
    mpz_class f;
    if (w.beta_num == 1 && w.beta_den == 2) {
        mpz_fac_ui(f.get_mpz_t(), 2 * k + 1);
        return Rat(2 * f);
    }
    if (w.beta_num == 1 && w.beta_den == 1) {
        mpz_fac_ui(f.get_mpz_t(), k);
        return Rat(f);
    }
    throw std::invalid_argument("oracle moments cover beta = 1/2 and beta = 1 only");
}

inline RatMatrix hankel_matrix(const hankel::WeightSpec& w, int n) {
    RatMatrix h(size_t(n), std::vector<Rat>(size_t(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h[size_t(i)][size_t(j)] = moment_rational(w, unsigned(i + j));
    return h;
}

struct RatFactors {
    std::vector<Rat> D;
    RatMatrix L; // full square, unit diagonal
};

// Textbook LDL^T elimination in exact rationals.
inline RatFactors ldlt_exact(RatMatrix a) {
    const int n = int(a.size());
    RatFactors f;
    f.D.resize(size_t(n));
    f.L.assign(size_t(n), std::vector<Rat>(size_t(n), Rat(0)));
    for (int i = 0; i < n; ++i) f.L[size_t(i)][size_t(i)] = 1;
    for (int i = 0; i < n; ++i) {
        f.D[size_t(i)] = a[size_t(i)][size_t(i)];
        if (sgn(f.D[size_t(i)]) <= 0) throw std::runtime_error("oracle ldlt: nonpositive pivot");
        for (int j = i + 1; j < n; ++j) f.L[size_t(j)][size_t(i)] = a[size_t(i)][size_t(j)] / f.D[size_t(i)];
        for (int j = i + 1; j < n; ++j)
            for (int k = j; k < n; ++k) {
                a[size_t(j)][size_t(k)] -= a[size_t(i)][size_t(j)] * f.L[size_t(k)][size_t(i)];
                a[size_t(k)][size_t(j)] = a[size_t(j)][size_t(k)];
            }
    }
    return f;
}

// Gauss-Jordan inverse in exact rationals (partial pivoting is unnecessary
// for the symmetric positive definite inputs used in tests, but kept for
// robustness).
inline RatMatrix invert_exact(RatMatrix a) {
    const int n = int(a.size());
    RatMatrix inv(size_t(n), std::vector<Rat>(size_t(n), Rat(0)));
    for (int i = 0; i < n; ++i) inv[size_t(i)][size_t(i)] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        while (piv < n && a[size_t(piv)][size_t(col)] == 0) ++piv;
        if (piv == n) throw std::runtime_error("oracle invert: singular");
        std::swap(a[size_t(piv)], a[size_t(col)]);
        std::swap(inv[size_t(piv)], inv[size_t(col)]);
        const Rat d = a[size_t(col)][size_t(col)];
        for (int j = 0; j < n; ++j) {
            a[size_t(col)][size_t(j)] /= d;
            inv[size_t(col)][size_t(j)] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a[size_t(r)][size_t(col)] == 0) continue;
            const Rat m = a[size_t(r)][size_t(col)];
            for (int j = 0; j < n; ++j) {
                a[size_t(r)][size_t(j)] -= m * a[size_t(col)][size_t(j)];
                inv[size_t(r)][size_t(j)] -= m * inv[size_t(col)][size_t(j)];
            }
        }
    }
    return inv;
}

inline Rat det_exact(RatMatrix a) {
    const int n = int(a.size());
    Rat det(1);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        while (piv < n && a[size_t(piv)][size_t(col)] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(a[size_t(piv)], a[size_t(col)]);
            det = -det;
        }
        det *= a[size_t(col)][size_t(col)];
        const Rat d = a[size_t(col)][size_t(col)];
        for (int r = col + 1; r < n; ++r) {
            if (a[size_t(r)][size_t(col)] == 0) continue;
            const Rat m = a[size_t(r)][size_t(col)] / d;
            for (int j = col; j < n; ++j) a[size_t(r)][size_t(j)] -= m * a[size_t(col)][size_t(j)];
        }
    }
    return det;
}

// Monic characteristic polynomial of det(xI - H) via Faddeev-LeVerrier;
// coefficients c[0..n] with c[0] the x^n coefficient (= 1).
inline std::vector<Rat> char_poly(const RatMatrix& h) {
    const int n = int(h.size());
    RatMatrix m(size_t(n), std::vector<Rat>(size_t(n), Rat(0)));
    std::vector<Rat> c(size_t(n) + 1, Rat(0));
    c[0] = 1;
    // m starts as the zero matrix; iterate m <- h (m + c_k I)
    for (int k = 1; k <= n; ++k) {
        RatMatrix next(size_t(n), std::vector<Rat>(size_t(n), Rat(0)));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                Rat s(0);
                for (int l = 0; l < n; ++l) {
                    Rat mlj = m[size_t(l)][size_t(j)];
                    if (l == j) mlj += c[size_t(k - 1)];
                    s += h[size_t(i)][size_t(l)] * mlj;
                }
                next[size_t(i)][size_t(j)] = s;
            }
        }
        m = std::move(next);
        Rat tr(0);
        for (int i = 0; i < n; ++i) tr += m[size_t(i)][size_t(i)];
        c[size_t(k)] = -tr / k;
    }
    return c;
}

inline int poly_sign(const std::vector<Rat>& c, const Rat& x) {
    Rat acc(0);
    for (const Rat& ci : c) acc = acc * x + ci;
    return sgn(acc);
}

// Smallest eigenvalue of a positive definite matrix with well-separated
// lambda_2 > 2 lambda_1, located by exact sign bisection on the
// characteristic polynomial. Accuracy ~2^-bits.
inline double smallest_eigenvalue(const RatMatrix& h, int bits = 96) {
    const std::vector<Rat> c = char_poly(h);
    const int s0 = poly_sign(c, Rat(0));
    if (s0 == 0) return 0.0;
    Rat lo(0);
    Rat hi(1, 1024);
    int guard = 0;
    while (poly_sign(c, hi) == s0) {
        lo = hi;
        hi *= 2;
        if (++guard > 64) throw std::runtime_error("oracle eigenvalue: bracketing failed");
    }
    for (int it = 0; it < bits; ++it) {
        Rat mid = (lo + hi) / 2;
        const int sm = poly_sign(c, mid);
        if (sm == 0) return mid.get_d();
        if (sm == s0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Rat mid = (lo + hi) / 2;
    return mid.get_d();
}

} // namespace oracle
