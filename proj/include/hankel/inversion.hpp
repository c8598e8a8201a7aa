#pragma once

#include "hankel/fixedpoint.hpp"
#include "hankel/ldlt.hpp"

#include <vector>

namespace hankel {

/// L and D reorganized from column ownership to row ownership (the same
/// balanced round robin applied to row indices). Values are bit-identical to
/// the source factors; only the layout changes.
struct RowDistributedL {
    int n = 0;
    long frac_bits = 0;
    ColumnAssignment row_owner;
    std::vector<std::vector<FixScalar>> rows; // rows[r] = entries (r, 0..r-1)
    std::vector<FixScalar> D;
};

RowDistributedL transpose_redistribute(const LdltFactors& factors);

/// Inverse layout swap, back to column ownership (bit-exact round trip).
LdltFactors retranspose(const RowDistributedL& rows);

/// First m columns of L^{-1} (in-place Gauss-Jordan row elimination output),
/// plus D for the downstream assembly sum. The unit diagonal is implicit and
/// entries above the diagonal are zero.
struct PartialInverse {
    int n = 0;
    int m = 0;
    long frac_bits = 0;
    std::vector<std::vector<FixScalar>> rows; // rows[r] = first min(r, m) entries of row r
    std::vector<FixScalar> D;

    /// Value of L^{-1}(row, col) for col < m.
    FixScalar entry(int row, int col) const;
};

PartialInverse invert_L_partial_serial(const LdltFactors& factors, int m);

/// Row-parallel variant: at iteration i the owner of row i publishes its first
/// min(i, m) entries and every worker updates its own rows. Bit-identical to
/// the serial variant.
PartialInverse invert_L_partial_parallel(const RowDistributedL& rows, int m,
                                         WorkerTimings* host_timings = nullptr);

/// Top-left k x k block of H^{-1} in binary64, with the (k-1) x (k-1)
/// principal sub-block retained for the truncation-error estimate.
struct TruncatedInverse {
    int k = 0;
    std::vector<double> M;       // k*k, row-major, exactly symmetric
    std::vector<double> M_minus; // (k-1)*(k-1), row-major

    double at(int i, int j) const { return M[size_t(i) * size_t(k) + size_t(j)]; }
};

/// (H^{-1})_{jk} = sum_l Linv_{lj} Linv_{lk} / D_ll, accumulated in fixed
/// point with exact products and one rounding per term, then cast to double.
TruncatedInverse assemble_truncated_inverse(const PartialInverse& inv, int k);

} // namespace hankel
