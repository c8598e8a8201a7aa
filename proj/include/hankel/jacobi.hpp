#pragma once

#include "hankel/inversion.hpp"

#include <vector>

namespace hankel {

struct JacobiOptions {
    double tol_factor = 1e-14; // stop when off(M) < tol_factor * ||M||_F
    int max_sweeps = 100;
};

/// Eigenvalues of a symmetric k x k matrix (row-major), ascending, via cyclic
/// Jacobi rotations. Throws std::runtime_error on non-convergence.
std::vector<double> jacobi_eigenvalues(std::vector<double> m, int k,
                                       const JacobiOptions& opts = {});

/// Smallest eigenvalues of H recovered from the truncated block of H^{-1}:
/// lambda_i(H) = 1 / mu_{k+1-i} with mu the ascending block eigenvalues. The
/// truncation error estimate per eigenvalue is the change relative to the
/// (k-1) block; it is NaN where the smaller block has no matching eigenvalue.
struct SmallestEigResult {
    std::vector<double> lambda;    // ascending, s entries
    std::vector<double> trunc_err; // same length
    int k_used = 0;
};

SmallestEigResult smallest_eigs_of_H(const TruncatedInverse& block, int s,
                                     const JacobiOptions& opts = {});

} // namespace hankel
