#include "hankel/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hankel {

namespace {

double off_diagonal_norm(const std::vector<double>& m, int k) {
    double s = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) s += 2 * m[size_t(i) * size_t(k) + size_t(j)] * m[size_t(i) * size_t(k) + size_t(j)];
    return std::sqrt(s);
}

double frobenius_norm(const std::vector<double>& m) {
    double s = 0;
    for (double v : m) s += v * v;
    return std::sqrt(s);
}

} // namespace

std::vector<double> jacobi_eigenvalues(std::vector<double> m, int k, const JacobiOptions& opts) {
    if (k < 1) throw std::invalid_argument("jacobi_eigenvalues: order must be >= 1");
    if (m.size() != size_t(k) * size_t(k))
        throw std::invalid_argument("jacobi_eigenvalues: matrix size mismatch");

    auto at = [&](int i, int j) -> double& { return m[size_t(i) * size_t(k) + size_t(j)]; };

    const double tol = opts.tol_factor * frobenius_norm(m);
    int sweep = 0;
    while (k > 1 && off_diagonal_norm(m, k) > tol) {
        if (++sweep > opts.max_sweeps)
            throw std::runtime_error("jacobi_eigenvalues: no convergence after max sweeps");
        for (int p = 0; p < k - 1; ++p) {
            for (int q = p + 1; q < k; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double app = at(p, p);
                const double aqq = at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int r = 0; r < k; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = at(r, p);
                    const double arq = at(r, q);
                    at(r, p) = c * arp - s * arq;
                    at(p, r) = at(r, p);
                    at(r, q) = s * arp + c * arq;
                    at(q, r) = at(r, q);
                }
            }
        }
    }

    std::vector<double> ev(static_cast<size_t>(k), 0.0);
    for (int i = 0; i < k; ++i) ev[size_t(i)] = at(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

SmallestEigResult smallest_eigs_of_H(const TruncatedInverse& block, int s,
                                     const JacobiOptions& opts) {
    const int k = block.k;
    if (s < 1 || s > k)
        throw std::invalid_argument("smallest_eigs_of_H: need 1 <= s <= k");

    const std::vector<double> mu = jacobi_eigenvalues(block.M, k, opts);
    std::vector<double> mu_minus;
    if (k > 1) mu_minus = jacobi_eigenvalues(block.M_minus, k - 1, opts);

    SmallestEigResult out;
    out.k_used = k;
    out.lambda.reserve(size_t(s));
    out.trunc_err.reserve(size_t(s));
    for (int i = 1; i <= s; ++i) {
        const double mu_i = mu[size_t(k - i)]; // i-th largest of the k block
        if (mu_i <= 0)
            throw std::runtime_error(
                "smallest_eigs_of_H: non-positive block eigenvalue; the truncation "
                "is too aggressive or the precision too small");
        out.lambda.push_back(1.0 / mu_i);
        if (i <= k - 1) {
            const double mu_im = mu_minus[size_t(k - 1 - i)]; // i-th largest of the k-1 block
            out.trunc_err.push_back(1.0 / mu_i - 1.0 / mu_im);
        } else {
            out.trunc_err.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    return out;
}

} // namespace hankel
