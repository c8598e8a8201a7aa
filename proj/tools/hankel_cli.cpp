// Command-line driver: end-to-end smallest-eigenvalue runs, N scans with
// optional automatic precision escalation, and the leading-exponent fit.
//
// Exit codes: 0 success, 2 precision exhausted, 3 input/schema error.

#include "hankel/errors.hpp"
#include "hankel/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

int default_workers() {
    if (const char* env = std::getenv("HANKEL_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return 1;
}

std::vector<int> parse_n_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        size_t pos = 0;
        const int n = std::stoi(item, &pos);
        if (pos != item.size() || n < 1) throw hankel::schema_error("bad N in --n-list: " + item);
        out.push_back(n);
    }
    return out;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream os(path);
    if (!os) throw hankel::schema_error("cannot open output file: " + path);
    os << content;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smallest eigenvalues of ill-conditioned Hankel matrices via "
                 "arbitrary-precision fixed-point LDLT"};
    app.require_subcommand(1);

    // --- compute ---
    auto* compute = app.add_subcommand("compute", "one eigenvalue run at fixed precision");
    int n = 0;
    unsigned beta_num = 1, beta_den = 2;
    long bits = 1024;
    int k = 8;
    int workers = default_workers();
    std::string format = "csv";
    compute->add_option("--n", n, "matrix order")->required();
    compute->add_option("--beta-num", beta_num, "numerator of the weight exponent beta");
    compute->add_option("--beta-den", beta_den, "denominator of the weight exponent beta");
    compute->add_option("--bits", bits, "fractional bits K")->required();
    compute->add_option("--k", k, "truncated block size");
    compute->add_option("--workers", workers, "worker count (default: HANKEL_WORKERS or 1)");
    compute->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // --- scan ---
    auto* scan = app.add_subcommand("scan", "one run per N, CSV output");
    std::string n_list_arg;
    bool auto_precision = false;
    std::string scan_out;
    scan->add_option("--n-list", n_list_arg, "comma-separated matrix orders")->required();
    scan->add_flag("--auto-precision", auto_precision, "escalate K per N until stable");
    scan->add_option("--bits", bits, "fractional bits K (fixed-precision scans)");
    scan->add_option("--beta-num", beta_num, "numerator of the weight exponent beta");
    scan->add_option("--beta-den", beta_den, "denominator of the weight exponent beta");
    scan->add_option("--k", k, "truncated block size");
    scan->add_option("--workers", workers, "worker count (default: HANKEL_WORKERS or 1)");
    scan->add_option("--out", scan_out, "output CSV path (default: stdout)");

    // --- fit ---
    auto* fit = app.add_subcommand("fit", "leading-exponent fit from a scan CSV");
    std::string fit_input, fit_out, plot_out;
    fit->add_option("--input", fit_input, "scan CSV path")->required();
    fit->add_option("--out", fit_out, "fit report JSON path (default: stdout)");
    fit->add_option("--plot-out", plot_out, "two-column x/y plot table path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints help / error text
        return e.get_exit_code() == 0 ? 0 : 3;
    }

    try {
        if (compute->parsed()) {
            hankel::ComputeOptions opts;
            opts.n = n;
            opts.beta = hankel::WeightSpec::make(beta_num, beta_den);
            opts.bits = bits;
            opts.k = k;
            opts.workers = workers;
            const hankel::RunRecord rec = hankel::compute(opts);
            if (format == "json") {
                std::cout << hankel::to_json(rec) << "\n";
            } else {
                std::cout << hankel::run_record_csv_header() << "\n" << hankel::to_csv_row(rec) << "\n";
            }
        } else if (scan->parsed()) {
            hankel::ScanOptions opts;
            opts.base.beta = hankel::WeightSpec::make(beta_num, beta_den);
            opts.base.bits = bits;
            opts.base.k = k;
            opts.base.workers = workers;
            opts.auto_bits = auto_precision;
            const auto records = hankel::scan(parse_n_list(n_list_arg), opts);
            std::ostringstream os;
            hankel::write_scan_csv(os, records);
            write_output(scan_out, os.str());
        } else if (fit->parsed()) {
            std::ifstream is(fit_input);
            if (!is) throw hankel::schema_error("cannot open input file: " + fit_input);
            const hankel::FitResult result = hankel::report(is);
            write_output(fit_out, hankel::to_json(result) + "\n");
            if (!plot_out.empty()) write_output(plot_out, hankel::plot_table(result));
        }
    } catch (const hankel::precision_error& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 2;
    } catch (const hankel::schema_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
