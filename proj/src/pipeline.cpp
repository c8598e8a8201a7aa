#include "hankel/pipeline.hpp"

#include "hankel/errors.hpp"
#include "hankel/inversion.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace hankel {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

RunRecord compute(const ComputeOptions& opts) {
    if (opts.n < 1) throw std::invalid_argument("compute: need N >= 1");
    if (opts.bits < 1) throw std::invalid_argument("compute: need bits >= 1");
    if (opts.workers < 1) throw std::invalid_argument("compute: need workers >= 1");
    if (opts.k < 1) throw std::invalid_argument("compute: need k >= 1");

    RunRecord rec;
    rec.n = opts.n;
    rec.beta = opts.beta;
    rec.bits = opts.bits;
    rec.k = std::min(opts.k, opts.n);
    rec.workers = opts.workers;

    const auto t_wall = Clock::now();

    const MomentTable table = build_hankel(opts.beta, opts.n, opts.bits);
    const ColumnAssignment assignment = assign_columns(opts.n, opts.workers);

    auto t0 = Clock::now();
    const LdltFactors factors = decompose_parallel(table, assignment, opts.policy);
    rec.ldlt_s = seconds_since(t0);

    t0 = Clock::now();
    const RowDistributedL rows = transpose_redistribute(factors);
    rec.transpose_s = seconds_since(t0);

    t0 = Clock::now();
    WorkerTimings host{};
    const PartialInverse linv = invert_L_partial_parallel(rows, rec.k, &host);
    rec.invL_s = seconds_since(t0);
    rec.invL_arith_s = host.arith_s;
    rec.invL_comm_s = host.comm_s;

    t0 = Clock::now();
    const TruncatedInverse block = assemble_truncated_inverse(linv, rec.k);
    rec.invH_s = seconds_since(t0);

    t0 = Clock::now();
    const int s = std::min(3, rec.k);
    const SmallestEigResult eig = smallest_eigs_of_H(block, s);
    rec.eigen_s = seconds_since(t0);

    rec.lambda = eig.lambda;
    rec.trunc_err = eig.trunc_err;
    rec.wall_s = seconds_since(t_wall);
    return rec;
}

std::pair<long, RunRecord> auto_precision(const ComputeOptions& base,
                                          const AutoPrecisionOptions& opts) {
    const long step = opts.step_bits;
    long k0 = opts.start_bits;
    if (k0 <= 0) k0 = step * ((base.n + 499) / 500);

    ComputeOptions run = base;
    run.bits = k0;
    RunRecord prev = compute(run);
    for (long bits = k0; bits <= opts.max_bits; bits += step) {
        run.bits = bits + step;
        RunRecord next = compute(run);
        if (std::abs(prev.lambda1() - next.lambda1()) <= opts.agree_tol) {
            prev.required_bits = bits;
            return {bits, prev};
        }
        prev = std::move(next);
    }
    throw precision_error("auto_precision: no agreement up to " + std::to_string(opts.max_bits) +
                          " bits (step " + std::to_string(step) + ")");
}

std::vector<RunRecord> scan(const std::vector<int>& n_list, const ScanOptions& opts) {
    std::vector<RunRecord> out;
    out.reserve(n_list.size());
    for (int n : n_list) {
        ComputeOptions run = opts.base;
        run.n = n;
        try {
            if (opts.auto_bits) {
                out.push_back(auto_precision(run, opts.auto_opts).second);
            } else {
                out.push_back(compute(run));
            }
        } catch (const std::exception& e) {
            std::cerr << "scan: N=" << n << " failed: " << e.what() << "\n";
            RunRecord failed;
            failed.n = n;
            failed.beta = run.beta;
            failed.bits = run.bits;
            failed.k = run.k;
            failed.workers = run.workers;
            failed.lambda.assign(3, std::numeric_limits<double>::quiet_NaN());
            failed.trunc_err.assign(3, std::numeric_limits<double>::quiet_NaN());
            out.push_back(std::move(failed));
        }
    }
    return out;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double lambda_or_nan(const RunRecord& r, size_t i) {
    return i < r.lambda.size() ? r.lambda[i] : std::numeric_limits<double>::quiet_NaN();
}

double trunc_or_nan(const RunRecord& r, size_t i) {
    return i < r.trunc_err.size() ? r.trunc_err[i] : std::numeric_limits<double>::quiet_NaN();
}

} // namespace

std::string run_record_csv_header() {
    return "N,beta,bits,k,workers,lambda1,trunc1,lambda2,trunc2,lambda3,trunc3,"
           "required_bits,wall_s,ldlt_s,transpose_s,invL_s,invL_arith_s,invL_comm_s,"
           "invH_s,eigen_s";
}

std::string to_csv_row(const RunRecord& r) {
    std::ostringstream os;
    os << r.n << ',' << r.beta.beta_num << '/' << r.beta.beta_den << ',' << r.bits << ',' << r.k
       << ',' << r.workers;
    for (size_t i = 0; i < 3; ++i) os << ',' << fmt(lambda_or_nan(r, i)) << ',' << fmt(trunc_or_nan(r, i));
    os << ',' << r.required_bits << ',' << fmt(r.wall_s) << ',' << fmt(r.ldlt_s) << ','
       << fmt(r.transpose_s) << ',' << fmt(r.invL_s) << ',' << fmt(r.invL_arith_s) << ','
       << fmt(r.invL_comm_s) << ',' << fmt(r.invH_s) << ',' << fmt(r.eigen_s);
    return os.str();
}

void write_scan_csv(std::ostream& os, const std::vector<RunRecord>& records) {
    os << run_record_csv_header() << '\n';
    for (const auto& r : records) os << to_csv_row(r) << '\n';
}

std::vector<FitPoint> read_scan_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw schema_error("scan CSV: empty input");

    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                fields.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        fields.push_back(cur);
        return fields;
    };

    const std::vector<std::string> header = split(line);
    long n_col = -1, l_col = -1;
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "N") n_col = long(i);
        if (header[i] == "lambda1") l_col = long(i);
    }
    if (n_col < 0 || l_col < 0)
        throw schema_error("scan CSV: header must contain N and lambda1 columns");

    std::vector<FitPoint> points;
    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split(line);
        if (long(fields.size()) <= std::max(n_col, l_col))
            throw schema_error("scan CSV: short row at line " + std::to_string(lineno));
        try {
            const double n = std::stod(fields[size_t(n_col)]);
            const double l1 = std::stod(fields[size_t(l_col)]);
            if (std::isnan(l1)) continue; // failed scan entry
            points.push_back(FitPoint{n, l1});
        } catch (const std::exception&) {
            throw schema_error("scan CSV: unparseable number at line " + std::to_string(lineno));
        }
    }
    return points;
}

std::string to_json(const RunRecord& r) {
    nlohmann::json j;
    j["N"] = r.n;
    j["beta"] = std::to_string(r.beta.beta_num) + "/" + std::to_string(r.beta.beta_den);
    j["bits"] = r.bits;
    j["k"] = r.k;
    j["workers"] = r.workers;
    j["lambda"] = r.lambda;
    j["trunc_err"] = r.trunc_err;
    if (r.required_bits > 0) j["required_bits"] = r.required_bits;
    j["timing"] = {{"wall_s", r.wall_s},
                   {"ldlt_s", r.ldlt_s},
                   {"transpose_s", r.transpose_s},
                   {"invL_s", r.invL_s},
                   {"invL_arith_s", r.invL_arith_s},
                   {"invL_comm_s", r.invL_comm_s},
                   {"invH_s", r.invH_s},
                   {"eigen_s", r.eigen_s}};
    return j.dump(2);
}

std::string to_json(const FitResult& fit) {
    nlohmann::json j;
    j["gradient"] = fit.gradient;
    j["intercept"] = fit.intercept;
    j["gradient_ci_95"] = {fit.gradient_ci_low, fit.gradient_ci_high};
    j["r_squared_adjusted"] = fit.r_squared_adjusted;
    j["residuals"] = fit.residuals;
    nlohmann::json pts = nlohmann::json::array();
    for (size_t i = 0; i < fit.x.size(); ++i) pts.push_back({fit.x[i], fit.y[i]});
    j["points_xy"] = pts;
    return j.dump(2);
}

std::string plot_table(const FitResult& fit) {
    std::ostringstream os;
    os << "# x = log(4 pi N e)    y = log((8 pi / lambda1) sqrt(log N))\n";
    os.precision(17);
    for (size_t i = 0; i < fit.x.size(); ++i) os << fit.x[i] << ' ' << fit.y[i] << '\n';
    return os.str();
}

FitResult report(std::istream& scan_csv) {
    const std::vector<FitPoint> points = read_scan_csv(scan_csv);
    if (points.size() < 3) throw schema_error("report: need at least 3 scan rows to fit");
    return fit_leading_exponent(points);
}

} // namespace hankel
