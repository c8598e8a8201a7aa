#pragma once

#include "hankel/fixedpoint.hpp"
#include "hankel/moments.hpp"

#include <vector>

namespace hankel {

/// Balanced round-robin (boustrophedon) ownership map. For w workers, columns
/// 0..w-1 go to workers 0..w-1, columns w..2w-1 to workers w-1..0, repeating;
/// per-worker column counts differ by at most one.
struct ColumnAssignment {
    int n = 0;
    int workers = 1;
    std::vector<int> owner; // owner[column] in [0, workers)

    std::vector<int> owned(int worker) const;
};

ColumnAssignment assign_columns(int n, int workers);

/// Thresholds of the B-column transmission loop. A freshly computed B column
/// is split into chunks of chunk_values entries; a chunk is published only
/// while at least min_outstanding_mults multiplications of elimination work
/// remain to overlap with. Tuned values from the source material, exposed as
/// configuration.
struct BroadcastPolicy {
    int chunk_values = 100;
    long min_outstanding_mults = 8000;
};

/// Whole-loop result with the work counter frozen: the number of B entries
/// that get published when remaining_multiplications stays at the given value
/// for every check. Receivers recompute whatever is not published.
int broadcast_prefix(int column_length, long remaining_multiplications,
                     const BroadcastPolicy& policy = {});

/// Chunk sizes the frozen-counter loop would send (e.g. {100, 100, 50}).
std::vector<int> broadcast_chunks(int column_length, long remaining_multiplications,
                                  const BroadcastPolicy& policy = {});

/// Time-resolved version of the same loop: one pump() per check, publishing at
/// most one chunk, with the caller supplying the current outstanding work.
/// Once a check fails the session closes for good.
class BroadcastSession {
public:
    explicit BroadcastSession(int total_values, BroadcastPolicy policy = {});

    /// Number of values newly cleared for publication (0 once closed/drained).
    int pump(long remaining_multiplications);

    int published() const noexcept { return published_; }
    bool closed() const noexcept { return closed_ || published_ == total_; }

private:
    int total_;
    int published_ = 0;
    bool closed_ = false;
    BroadcastPolicy policy_;
};

/// Dynamic-scheduling batch size for a flattened elimination loop:
/// max(5, loop_iterations / (200 * threads)).
long chunk_size(long loop_iterations, int threads);

/// Per-worker instrumentation (reported for the host worker, index 0).
struct WorkerTimings {
    double arith_s = 0.0;
    double comm_s = 0.0;
};

/// H = L D L^T with unit-lower-triangular L (implicit diagonal) and positive
/// diagonal D, both truncated to the table's K fractional bits. L is stored
/// per column under the ownership map used to compute it.
struct LdltFactors {
    int n = 0;
    long frac_bits = 0; // K
    ColumnAssignment assignment;
    std::vector<FixScalar> D;
    std::vector<std::vector<FixScalar>> L; // L[j][r] = L[(j+1)+r][j]
    unsigned long long update_count = 0;   // instrumented (i,j,k) eliminations

    const FixScalar& l_entry(int row, int col) const { return L[size_t(col)][size_t(row - col - 1)]; }
};

/// Right-looking elimination, one worker. All arithmetic at 2K fractional
/// bits; one rounding per update; outputs truncated to K. Throws
/// precision_error on a non-positive pivot.
LdltFactors decompose_serial(const MomentTable& table);

/// Worker-parallel elimination under the given column assignment. Column
/// owners publish each finished column (plus a policy-limited prefix of its
/// quotient column B) through an in-process channel; every worker observes
/// column i before starting iteration i. Output is bit-identical to
/// decompose_serial for every worker count.
LdltFactors decompose_parallel(const MomentTable& table, const ColumnAssignment& assignment,
                               const BroadcastPolicy& policy = {},
                               WorkerTimings* host_timings = nullptr);

} // namespace hankel
