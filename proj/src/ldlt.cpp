#include "hankel/ldlt.hpp"

#include "hankel/errors.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace hankel {

std::vector<int> ColumnAssignment::owned(int worker) const {
    std::vector<int> cols;
    for (int c = 0; c < n; ++c)
        if (owner[size_t(c)] == worker) cols.push_back(c);
    return cols;
}

ColumnAssignment assign_columns(int n, int workers) {
    if (n < 1) throw std::invalid_argument("assign_columns: order must be >= 1");
    if (workers < 1) throw std::invalid_argument("assign_columns: worker count must be >= 1");
    ColumnAssignment a;
    a.n = n;
    a.workers = workers;
    a.owner.resize(size_t(n));
    for (int c = 0; c < n; ++c) {
        const int block = c / workers;
        const int r = c % workers;
        a.owner[size_t(c)] = (block % 2 == 0) ? r : workers - 1 - r;
    }
    return a;
}

std::vector<int> broadcast_chunks(int column_length, long remaining_multiplications,
                                  const BroadcastPolicy& policy) {
    std::vector<int> chunks;
    int sent = 0;
    while (sent < column_length && remaining_multiplications >= policy.min_outstanding_mults) {
        const int c = std::min(policy.chunk_values, column_length - sent);
        chunks.push_back(c);
        sent += c;
    }
    return chunks;
}

int broadcast_prefix(int column_length, long remaining_multiplications,
                     const BroadcastPolicy& policy) {
    int sent = 0;
    for (int c : broadcast_chunks(column_length, remaining_multiplications, policy)) sent += c;
    return sent;
}

BroadcastSession::BroadcastSession(int total_values, BroadcastPolicy policy)
    : total_(total_values), policy_(policy) {}

int BroadcastSession::pump(long remaining_multiplications) {
    if (closed_ || published_ == total_) return 0;
    if (remaining_multiplications < policy_.min_outstanding_mults) {
        closed_ = true;
        return 0;
    }
    const int c = std::min(policy_.chunk_values, total_ - published_);
    published_ += c;
    return c;
}

long chunk_size(long loop_iterations, int threads) {
    if (threads < 1) throw std::invalid_argument("chunk_size: threads must be >= 1");
    return std::max(5l, loop_iterations / (200l * threads));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void throw_pivot_error(int column, long bits) {
    throw precision_error("LDLT pivot <= 0 at column " + std::to_string(column) +
                          ": matrix not positive definite at K=" + std::to_string(bits) +
                          " fractional bits, increase the precision");
}

} // namespace

LdltFactors decompose_serial(const MomentTable& table) {
    const int n = table.order();
    const long K = table.frac_bits();
    const long WK = 2 * K;

    std::vector<std::vector<FixScalar>> A;
    A.reserve(size_t(n));
    for (int j = 0; j < n; ++j) A.push_back(table.working_column(j, WK));

    LdltFactors out;
    out.n = n;
    out.frac_bits = K;
    out.assignment = assign_columns(n, 1);
    out.D.resize(size_t(n));
    out.L.resize(size_t(n));

    std::vector<FixScalar> B;
    for (int i = 0; i < n; ++i) {
        auto& ai = A[size_t(i)];
        const FixScalar& pivot = ai[0];
        if (pivot.sign() <= 0) throw_pivot_error(i, K);

        B.clear();
        B.reserve(size_t(n - i - 1));
        for (int j = i + 1; j < n; ++j) B.push_back(ai[size_t(j - i)].div(pivot, WK));

        out.D[size_t(i)] = pivot.truncate(K);
        auto& Lcol = out.L[size_t(i)];
        Lcol.reserve(B.size());
        for (const auto& b : B) Lcol.push_back(b.truncate(K));

        for (int j = i + 1; j < n; ++j) {
            const FixScalar& mult = ai[size_t(j - i)];
            auto& aj = A[size_t(j)];
            for (int k = j; k < n; ++k) {
                submul_rounded(aj[size_t(k - j)], mult, B[size_t(k - i - 1)]);
            }
            out.update_count += unsigned(n - j);
        }

        ai.clear();
        ai.shrink_to_fit();
    }
    return out;
}

namespace {

struct ColumnSlot {
    std::vector<FixScalar> a;        // rows i..n-1 at working precision; a[0] is the pivot
    std::vector<FixScalar> b_prefix; // published prefix of B_i
    bool complete = false;
    int consumed = 0;
};

struct Shared {
    int n = 0;
    int workers = 1;
    long K = 0;
    long WK = 0;
    const MomentTable* table = nullptr;
    BroadcastPolicy policy;

    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::unique_ptr<ColumnSlot>> slots;
    bool failed = false;
    bool precision_failure = false;
    std::string error;

    std::vector<FixScalar> D;
    std::vector<std::vector<FixScalar>> L;
    std::vector<unsigned long long> updates;
    std::vector<WorkerTimings> timings;
};

struct Aborted {};

void fail(Shared& sh, bool precision, const std::string& msg) {
    {
        std::scoped_lock lk(sh.mu);
        if (!sh.failed) {
            sh.failed = true;
            sh.precision_failure = precision;
            sh.error = msg;
        }
    }
    sh.cv.notify_all();
}

ColumnSlot* wait_complete(Shared& sh, int col) {
    std::unique_lock lk(sh.mu);
    sh.cv.wait(lk, [&] { return sh.failed || (sh.slots[size_t(col)] && sh.slots[size_t(col)]->complete); });
    if (sh.failed) throw Aborted{};
    return sh.slots[size_t(col)].get();
}

void consume_slot(Shared& sh, int col) {
    std::scoped_lock lk(sh.mu);
    auto& slot = sh.slots[size_t(col)];
    if (slot && ++slot->consumed == sh.workers) slot.reset();
}

// B_i seen by one worker: the published prefix lives in the slot, the rest is
// recomputed locally.
struct BColumn {
    const std::vector<FixScalar>* prefix = nullptr;
    size_t prefix_len = 0;
    std::vector<FixScalar> local;

    const FixScalar& at(size_t t) const {
        return t < prefix_len ? (*prefix)[t] : local[t - prefix_len];
    }
};

void worker_main(Shared& sh, const ColumnAssignment& asg, int w) {
    auto& tm = sh.timings[size_t(w)];
    auto& updates = sh.updates[size_t(w)];
    try {
        const int n = sh.n;
        std::vector<char> mine(size_t(n), 0);
        for (int c : asg.owned(w)) mine[size_t(c)] = 1;

        auto t0 = Clock::now();
        const size_t n_cols = size_t(n);
        std::vector<std::vector<FixScalar>> cols(n_cols);
        for (int c = 1; c < n; ++c)
            if (mine[size_t(c)]) cols[size_t(c)] = sh.table->working_column(c, sh.WK);

        std::vector<FixScalar> col0;
        std::vector<FixScalar> next_b; // full B_{i+1} kept by the owner of column i+1
        BColumn b;
        tm.arith_s += seconds_since(t0);

        for (int i = 0; i < n; ++i) {
            const std::vector<FixScalar>* ai = nullptr;
            if (i == 0) {
                t0 = Clock::now();
                col0 = sh.table->working_column(0, sh.WK);
                ai = &col0;
                if (col0[0].sign() <= 0) {
                    fail(sh, true, "LDLT pivot <= 0 at column 0");
                    throw Aborted{};
                }
                // Every worker derives B_0 from the initial data.
                b = BColumn{};
                b.local.reserve(size_t(n - 1));
                for (int j = 1; j < n; ++j) b.local.push_back(col0[size_t(j)].div(col0[0], sh.WK));
                if (mine[0]) {
                    sh.D[0] = col0[0].truncate(sh.K);
                    auto& Lc = sh.L[0];
                    Lc.reserve(b.local.size());
                    for (const auto& x : b.local) Lc.push_back(x.truncate(sh.K));
                }
                tm.arith_s += seconds_since(t0);
            } else {
                t0 = Clock::now();
                ColumnSlot* slot = wait_complete(sh, i);
                tm.comm_s += seconds_since(t0);
                ai = &slot->a;
                t0 = Clock::now();
                b = BColumn{};
                if (mine[size_t(i)]) {
                    b.local = std::move(next_b);
                } else {
                    b.prefix = &slot->b_prefix;
                    b.prefix_len = slot->b_prefix.size();
                    const FixScalar& pivot = (*ai)[0];
                    for (size_t j = size_t(i) + 1 + b.prefix_len; j < size_t(n); ++j)
                        b.local.push_back((*ai)[j - size_t(i)].div(pivot, sh.WK));
                }
                tm.arith_s += seconds_since(t0);
            }

            if (i == n - 1) {
                if (i > 0) consume_slot(sh, i);
                break;
            }

            t0 = Clock::now();
            if (mine[size_t(i + 1)]) {
                // Eagerly finish column i+1, derive B_{i+1}, publish, then do
                // the rest of this worker's updates while pumping B chunks.
                auto& acol = cols[size_t(i + 1)];
                const FixScalar& mult = (*ai)[1];
                for (size_t t = 0; t < acol.size(); ++t) submul_rounded(acol[t], mult, b.at(t));
                updates += acol.size();

                const FixScalar pivot = acol[0];
                if (pivot.sign() <= 0) {
                    fail(sh, true, "LDLT pivot <= 0 at column " + std::to_string(i + 1) +
                                       ": matrix not positive definite at K=" + std::to_string(sh.K) +
                                       " fractional bits, increase the precision");
                    throw Aborted{};
                }
                next_b.clear();
                next_b.reserve(size_t(n - i - 2));
                for (int j = i + 2; j < n; ++j) next_b.push_back(acol[size_t(j - i - 1)].div(pivot, sh.WK));
                sh.D[size_t(i + 1)] = pivot.truncate(sh.K);
                auto& Lc = sh.L[size_t(i + 1)];
                Lc.reserve(next_b.size());
                for (const auto& x : next_b) Lc.push_back(x.truncate(sh.K));

                {
                    std::scoped_lock lk(sh.mu);
                    sh.slots[size_t(i + 1)] = std::make_unique<ColumnSlot>();
                    sh.slots[size_t(i + 1)]->a = std::move(acol);
                }

                long remaining = 0;
                for (int j = i + 2; j < n; ++j)
                    if (mine[size_t(j)]) remaining += n - j;
                BroadcastSession session(int(next_b.size()), sh.policy);
                const long batch = chunk_size(std::max(remaining, 1l), 1);
                long until_pump = 0;
                for (int j = i + 2; j < n; ++j) {
                    if (!mine[size_t(j)]) continue;
                    auto& aj = cols[size_t(j)];
                    const FixScalar& mj = (*ai)[size_t(j - i)];
                    for (int k = j; k < n; ++k) {
                        if (until_pump == 0) {
                            if (const int add = session.pump(remaining); add > 0) {
                                std::scoped_lock lk(sh.mu);
                                auto& pref = sh.slots[size_t(i + 1)]->b_prefix;
                                const size_t base = pref.size();
                                for (size_t t = base; t < base + size_t(add); ++t)
                                    pref.push_back(next_b[t]);
                            }
                            until_pump = batch;
                        }
                        submul_rounded(aj[size_t(k - j)], mj, b.at(size_t(k - i - 1)));
                        --remaining;
                        --until_pump;
                        ++updates;
                    }
                }
                {
                    std::scoped_lock lk(sh.mu);
                    sh.slots[size_t(i + 1)]->complete = true;
                }
                sh.cv.notify_all();
            } else {
                for (int j = i + 1; j < n; ++j) {
                    if (!mine[size_t(j)]) continue;
                    auto& aj = cols[size_t(j)];
                    const FixScalar& mj = (*ai)[size_t(j - i)];
                    for (int k = j; k < n; ++k) submul_rounded(aj[size_t(k - j)], mj, b.at(size_t(k - i - 1)));
                    updates += unsigned(n - j);
                }
            }
            tm.arith_s += seconds_since(t0);

            if (i > 0) consume_slot(sh, i);
        }
    } catch (const Aborted&) {
        return;
    } catch (const std::exception& e) {
        fail(sh, false, e.what());
        return;
    }
}

} // namespace

LdltFactors decompose_parallel(const MomentTable& table, const ColumnAssignment& assignment,
                               const BroadcastPolicy& policy, WorkerTimings* host_timings) {
    const int n = table.order();
    if (assignment.n != n || int(assignment.owner.size()) != n)
        throw std::invalid_argument("decompose_parallel: assignment does not match matrix order");

    Shared sh;
    sh.n = n;
    sh.workers = assignment.workers;
    sh.K = table.frac_bits();
    sh.WK = 2 * sh.K;
    sh.table = &table;
    sh.policy = policy;
    sh.slots.resize(size_t(n));
    sh.D.resize(size_t(n));
    sh.L.resize(size_t(n));
    sh.updates.assign(size_t(sh.workers), 0);
    sh.timings.assign(size_t(sh.workers), WorkerTimings{});

    std::vector<std::thread> pool;
    pool.reserve(size_t(sh.workers));
    for (int w = 0; w < sh.workers; ++w)
        pool.emplace_back([&sh, &assignment, w] { worker_main(sh, assignment, w); });
    for (auto& t : pool) t.join();

    if (sh.failed) {
        if (sh.precision_failure) throw precision_error(sh.error);
        throw std::runtime_error(sh.error);
    }

    if (host_timings) *host_timings = sh.timings[0];

    LdltFactors out;
    out.n = n;
    out.frac_bits = sh.K;
    out.assignment = assignment;
    out.D = std::move(sh.D);
    out.L = std::move(sh.L);
    for (auto u : sh.updates) out.update_count += u;
    return out;
}

} // namespace hankel
