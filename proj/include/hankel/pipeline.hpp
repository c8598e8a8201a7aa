#pragma once

#include "hankel/asymptotics.hpp"
#include "hankel/jacobi.hpp"
#include "hankel/ldlt.hpp"
#include "hankel/moments.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hankel {

struct ComputeOptions {
    int n = 1;
    WeightSpec beta{1, 2};
    long bits = 1024; // K
    int k = 8;        // truncation block (clamped to n)
    int workers = 1;
    BroadcastPolicy policy{};
};

/// One end-to-end run: moments -> parallel LDLT -> transpose -> partial L^-1
/// -> truncated H^-1 -> Jacobi. Numeric fields are deterministic across
/// repeats and worker counts; timing fields are not.
struct RunRecord {
    int n = 0;
    WeightSpec beta{1, 2};
    long bits = 0;
    int k = 0;
    int workers = 0;
    std::vector<double> lambda;    // up to 3 smallest eigenvalues, ascending
    std::vector<double> trunc_err; // matching truncation-error estimates
    long required_bits = 0;        // set by auto_precision runs, else 0

    double wall_s = 0;
    double ldlt_s = 0;
    double transpose_s = 0;
    double invL_s = 0;
    double invL_arith_s = 0;
    double invL_comm_s = 0;
    double invH_s = 0;
    double eigen_s = 0;

    double lambda1() const { return lambda.at(0); }
};

RunRecord compute(const ComputeOptions& opts);

struct AutoPrecisionOptions {
    long start_bits = 0;     // 0 -> 1024 * ceil(n / 500)
    long step_bits = 1024;
    long max_bits = 16384;   // give up past this
    double agree_tol = 1e-15; // absolute agreement on lambda1
};

/// Smallest K (multiple of step_bits, starting from the N-based heuristic)
/// such that runs at K and K+step agree on lambda1 within agree_tol. Returns
/// that K and the accepted run's record (required_bits filled in). Throws
/// precision_error when max_bits is exceeded without agreement.
std::pair<long, RunRecord> auto_precision(const ComputeOptions& base,
                                          const AutoPrecisionOptions& opts = {});

struct ScanOptions {
    ComputeOptions base;                       // n is overridden per entry
    bool auto_bits = false;                    // auto_precision per N
    AutoPrecisionOptions auto_opts{};
};

/// One record per N; failures are reported on stderr and recorded as NaN
/// lambda rows so the scan keeps going.
std::vector<RunRecord> scan(const std::vector<int>& n_list, const ScanOptions& opts);

// --- serialization -----------------------------------------------------

std::string run_record_csv_header();
std::string to_csv_row(const RunRecord& rec);
void write_scan_csv(std::ostream& os, const std::vector<RunRecord>& records);

/// Extracts (N, lambda1) pairs; throws schema_error on a malformed header or
/// rows. NaN rows (failed scan entries) are skipped.
std::vector<FitPoint> read_scan_csv(std::istream& is);

std::string to_json(const RunRecord& rec);
std::string to_json(const FitResult& fit);

/// Two-column whitespace-separated plot table (x, y) of the fit inputs.
std::string plot_table(const FitResult& fit);

/// Fit report for a scan CSV: parses, fits, returns the result (the JSON and
/// plot-table serializers above turn it into the external formats).
FitResult report(std::istream& scan_csv);

} // namespace hankel
