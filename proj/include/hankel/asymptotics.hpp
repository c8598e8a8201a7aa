#pragma once

#include <vector>

namespace hankel {

/// Closed-form large-N approximations for the smallest eigenvalue at the
/// critical weight exponent, and for the kernel diagonal sum controlling the
/// lower bound 2*pi / sum(K_jj). Four published lambda_1 formulas are exposed
/// side by side; none is silently substituted for another.
struct Prediction {
    int n = 0;
    double lambda1_leading = 0;        // 8 pi sqrt(log N) / (4 pi N e)^(2/pi)
    double lambda1_nlo = 0;            // leading with the bracketed 1/log N correction
    double lambda1_saddle = 0;         // saddle-point form with shifted log argument
    double lambda1_conjecture_old = 0; // earlier conjectured variant
    double sumK_leading = 0;
    double sumK_nlo = 0;
    double lower_bound = 0;            // 2 pi / sumK_leading
};

Prediction predict(int n);

struct FitPoint {
    double n;
    double lambda1;
};

/// Weighted log-log regression extracting the leading decay exponent:
/// y = intercept + gradient * x with x = log(4 pi N e),
/// y = log((8 pi / lambda1) sqrt(log N)), weights proportional to N^2.
struct FitResult {
    double gradient = 0;
    double intercept = 0;
    double gradient_ci_low = 0;  // 95% t interval
    double gradient_ci_high = 0;
    double r_squared_adjusted = 0;
    std::vector<double> residuals;
    std::vector<double> x; // transformed abscissae (plot table)
    std::vector<double> y; // transformed ordinates
};

FitResult fit_leading_exponent(const std::vector<FitPoint>& points);

namespace detail {

struct WlsFit {
    double gradient = 0;
    double intercept = 0;
    double gradient_ci_low = 0;
    double gradient_ci_high = 0;
    double r_squared_adjusted = 0;
    std::vector<double> residuals;
};

/// Weighted least squares y = a + b x with a 95% t interval on b.
WlsFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<double>& w);

} // namespace detail

} // namespace hankel
