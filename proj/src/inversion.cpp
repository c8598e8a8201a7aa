#include "hankel/inversion.hpp"

#include "hankel/errors.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hankel {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

RowDistributedL transpose_redistribute(const LdltFactors& factors) {
    RowDistributedL out;
    out.n = factors.n;
    out.frac_bits = factors.frac_bits;
    out.row_owner = assign_columns(factors.n, factors.assignment.workers);
    out.D = factors.D;
    out.rows.resize(size_t(factors.n));
    for (int r = 0; r < factors.n; ++r) {
        auto& row = out.rows[size_t(r)];
        row.reserve(size_t(r));
        for (int c = 0; c < r; ++c) row.push_back(factors.l_entry(r, c));
    }
    return out;
}

LdltFactors retranspose(const RowDistributedL& rows) {
    LdltFactors out;
    out.n = rows.n;
    out.frac_bits = rows.frac_bits;
    out.assignment = assign_columns(rows.n, rows.row_owner.workers);
    out.D = rows.D;
    out.L.resize(size_t(rows.n));
    for (int c = 0; c < rows.n; ++c) {
        auto& col = out.L[size_t(c)];
        col.reserve(size_t(rows.n - c - 1));
        for (int r = c + 1; r < rows.n; ++r) col.push_back(rows.rows[size_t(r)][size_t(c)]);
    }
    return out;
}

FixScalar PartialInverse::entry(int row, int col) const {
    if (col >= m) throw std::out_of_range("PartialInverse: column beyond retained block");
    if (col > row) return FixScalar(mpz_class(0), frac_bits);
    if (col == row) return FixScalar::from_integer(1, frac_bits);
    return rows[size_t(row)][size_t(col)];
}

namespace {

template <typename LEntry>
std::vector<std::vector<FixScalar>> init_work_rows(int n, int m, LEntry&& l) {
    const size_t n_rows = size_t(n);
    std::vector<std::vector<FixScalar>> work(n_rows);
    for (int r = 0; r < n; ++r) {
        const int len = std::min(r, m);
        work[size_t(r)].reserve(size_t(len));
        for (int c = 0; c < len; ++c) work[size_t(r)].push_back(l(r, c));
    }
    return work;
}

} // namespace

PartialInverse invert_L_partial_serial(const LdltFactors& factors, int m) {
    const int n = factors.n;
    if (m < 1 || m > n) throw std::invalid_argument("invert_L_partial: need 1 <= m <= n");

    PartialInverse out;
    out.n = n;
    out.m = m;
    out.frac_bits = factors.frac_bits;
    out.D = factors.D;
    out.rows = init_work_rows(n, m, [&](int r, int c) -> const FixScalar& { return factors.l_entry(r, c); });

    // In-place row elimination. The multiplier f = A[j][i] is always read
    // before anything writes to column i, so for i >= m it comes straight
    // from the untouched factor storage.
    auto& work = out.rows;
    for (int i = 0; i < n; ++i) {
        const int bound = std::min(m, i);
        const auto& rowi = work[size_t(i)];
        for (int j = i + 1; j < n; ++j) {
            auto& target = work[size_t(j)];
            const FixScalar f = i < m ? target[size_t(i)] : factors.l_entry(j, i);
            if (i < m) target[size_t(i)] = -f;
            for (int k = 0; k < bound; ++k) submul_rounded(target[size_t(k)], f, rowi[size_t(k)]);
        }
    }
    return out;
}

namespace {

struct RowSlot {
    std::vector<FixScalar> values; // first min(i, m) entries of the finished row i
    bool ready = false;
    int consumed = 0;
};

struct InvShared {
    int n = 0;
    int m = 0;
    int workers = 1;
    const RowDistributedL* src = nullptr;

    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::unique_ptr<RowSlot>> slots;
    bool failed = false;
    std::string error;

    std::vector<std::vector<FixScalar>> work; // disjoint row writes by owner
    std::vector<WorkerTimings> timings;
};

struct InvAborted {};

const std::vector<FixScalar>* inv_wait(InvShared& sh, int row) {
    std::unique_lock lk(sh.mu);
    sh.cv.wait(lk, [&] { return sh.failed || (sh.slots[size_t(row)] && sh.slots[size_t(row)]->ready); });
    if (sh.failed) throw InvAborted{};
    return &sh.slots[size_t(row)]->values;
}

void inv_consume(InvShared& sh, int row) {
    std::scoped_lock lk(sh.mu);
    auto& slot = sh.slots[size_t(row)];
    if (slot && ++slot->consumed == sh.workers) slot.reset();
}

void inv_worker(InvShared& sh, int w) {
    auto& tm = sh.timings[size_t(w)];
    try {
        const int n = sh.n;
        const int m = sh.m;
        const auto& owner = sh.src->row_owner.owner;
        for (int i = 0; i < n; ++i) {
            const std::vector<FixScalar>* rowi = nullptr;
            if (owner[size_t(i)] == w) {
                auto t0 = Clock::now();
                {
                    std::scoped_lock lk(sh.mu);
                    auto slot = std::make_unique<RowSlot>();
                    slot->values = sh.work[size_t(i)]; // finished; first min(i, m) entries
                    slot->ready = true;
                    sh.slots[size_t(i)] = std::move(slot);
                }
                sh.cv.notify_all();
                rowi = &sh.slots[size_t(i)]->values;
                tm.comm_s += seconds_since(t0);
            } else {
                auto t0 = Clock::now();
                rowi = inv_wait(sh, i);
                tm.comm_s += seconds_since(t0);
            }

            auto t0 = Clock::now();
            const int bound = std::min(m, i);
            for (int j = i + 1; j < n; ++j) {
                if (owner[size_t(j)] != w) continue;
                auto& target = sh.work[size_t(j)];
                const FixScalar f =
                    i < m ? target[size_t(i)] : sh.src->rows[size_t(j)][size_t(i)];
                if (i < m) target[size_t(i)] = -f;
                for (int k = 0; k < bound; ++k) submul_rounded(target[size_t(k)], f, (*rowi)[size_t(k)]);
            }
            tm.arith_s += seconds_since(t0);
            inv_consume(sh, i);
        }
    } catch (const InvAborted&) {
        return;
    } catch (const std::exception& e) {
        std::scoped_lock lk(sh.mu);
        if (!sh.failed) {
            sh.failed = true;
            sh.error = e.what();
        }
        sh.cv.notify_all();
        return;
    }
}

} // namespace

PartialInverse invert_L_partial_parallel(const RowDistributedL& rows, int m,
                                         WorkerTimings* host_timings) {
    const int n = rows.n;
    if (m < 1 || m > n) throw std::invalid_argument("invert_L_partial: need 1 <= m <= n");

    InvShared sh;
    sh.n = n;
    sh.m = m;
    sh.workers = rows.row_owner.workers;
    sh.src = &rows;
    sh.slots.resize(size_t(n));
    sh.timings.assign(size_t(sh.workers), WorkerTimings{});
    sh.work = init_work_rows(n, m, [&](int r, int c) -> const FixScalar& {
        return rows.rows[size_t(r)][size_t(c)];
    });

    std::vector<std::thread> pool;
    pool.reserve(size_t(sh.workers));
    for (int w = 0; w < sh.workers; ++w) pool.emplace_back([&sh, w] { inv_worker(sh, w); });
    for (auto& t : pool) t.join();
    if (sh.failed) throw std::runtime_error(sh.error);

    if (host_timings) *host_timings = sh.timings[0];

    PartialInverse out;
    out.n = n;
    out.m = m;
    out.frac_bits = rows.frac_bits;
    out.D = rows.D;
    out.rows = std::move(sh.work);
    return out;
}

TruncatedInverse assemble_truncated_inverse(const PartialInverse& inv, int k) {
    const int n = inv.n;
    if (k < 1 || k > inv.m) throw std::invalid_argument("assemble_truncated_inverse: need 1 <= k <= m");

    const long K = inv.frac_bits;
    const long WK = 2 * K;
    const FixScalar one = FixScalar::from_integer(1, K);
    for (int l = 0; l < n; ++l) {
        if (inv.D[size_t(l)].is_zero())
            throw precision_error("assemble_truncated_inverse: zero pivot in D");
    }

    auto lv = [&](int l, int col) -> const FixScalar& {
        return l == col ? one : inv.rows[size_t(l)][size_t(col)];
    };

    TruncatedInverse out;
    out.k = k;
    out.M.assign(size_t(k) * size_t(k), 0.0);
    for (int j = 0; j < k; ++j) {
        for (int c = j; c < k; ++c) {
            FixScalar acc = FixScalar::from_integer(0, WK);
            for (int l = std::max(j, c); l < n; ++l) {
                const FixScalar prod = lv(l, j) * lv(l, c);            // exact, 2K
                acc = acc + prod.div(inv.D[size_t(l)], WK);             // one rounding per term
            }
            const double v = acc.to_double();
            out.M[size_t(j) * size_t(k) + size_t(c)] = v;
            out.M[size_t(c) * size_t(k) + size_t(j)] = v;
        }
    }
    if (k > 1) {
        out.M_minus.assign(size_t(k - 1) * size_t(k - 1), 0.0);
        for (int j = 0; j < k - 1; ++j)
            for (int c = 0; c < k - 1; ++c)
                out.M_minus[size_t(j) * size_t(k - 1) + size_t(c)] = out.at(j, c);
    }
    return out;
}

} // namespace hankel
