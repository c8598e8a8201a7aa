#include "hankel/asymptotics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hankel {

Prediction predict(int n) {
    if (n < 2) throw std::invalid_argument("predict: need N >= 2");
    using std::numbers::e;
    using std::numbers::pi;

    const double N = n;
    const double two_over_pi = 2.0 / pi;
    const double logN = std::log(N);
    const double pow4piNe = std::pow(4 * pi * N * e, two_over_pi);
    // log argument of the saddle-point form: 4 pi e^(-1-pi/2) N
    const double shifted = std::log(4 * pi * std::exp(-1 - pi / 2) * N);

    Prediction p;
    p.n = n;
    p.lambda1_leading = 8 * pi * std::sqrt(logN) / pow4piNe;
    p.lambda1_saddle =
        8 * pi * std::sqrt(shifted) / (std::pow(4 * pi * e, two_over_pi) * std::pow(N, two_over_pi));
    p.lambda1_nlo =
        p.lambda1_leading * (1.0 + (8 * std::log(4 * pi * std::exp(-1 - pi / 2)) - pi) / (16 * logN));
    p.lambda1_conjecture_old = 8 * pi * std::sqrt(std::log(4 * pi * N * e)) / pow4piNe;
    p.sumK_leading = pow4piNe / (4 * std::sqrt(logN));
    p.sumK_nlo = pow4piNe / (4 * std::sqrt(shifted)) * (1.0 + pi / (16 * logN));
    p.lower_bound = 2 * pi / p.sumK_leading;
    return p;
}

namespace detail {

WlsFit weighted_linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                           const std::vector<double>& w) {
    const size_t n = x.size();
    if (n < 3 || y.size() != n || w.size() != n)
        throw std::invalid_argument("weighted_linear_fit: need at least 3 matching points");

    double W = 0, xbar = 0, ybar = 0;
    for (size_t i = 0; i < n; ++i) {
        W += w[i];
        xbar += w[i] * x[i];
        ybar += w[i] * y[i];
    }
    xbar /= W;
    ybar /= W;

    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
        sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
    }
    if (sxx == 0) throw std::invalid_argument("weighted_linear_fit: degenerate design (all x equal)");

    WlsFit r;
    r.gradient = sxy / sxx;
    r.intercept = ybar - r.gradient * xbar;

    r.residuals.resize(n);
    double ss_res = 0, ss_tot = 0;
    for (size_t i = 0; i < n; ++i) {
        r.residuals[i] = y[i] - (r.intercept + r.gradient * x[i]);
        ss_res += w[i] * r.residuals[i] * r.residuals[i];
        ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
    }

    const double dof = double(n) - 2.0;
    const double sigma2 = ss_res / dof;
    const double se = std::sqrt(sigma2 / sxx);
    const boost::math::students_t_distribution<double> tdist(dof);
    const double tq = boost::math::quantile(tdist, 0.975);
    r.gradient_ci_low = r.gradient - tq * se;
    r.gradient_ci_high = r.gradient + tq * se;

    const double r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    r.r_squared_adjusted = 1.0 - (1.0 - r2) * (double(n) - 1.0) / dof;
    return r;
}

} // namespace detail

FitResult fit_leading_exponent(const std::vector<FitPoint>& points) {
    using std::numbers::pi;
    const size_t n = points.size();
    if (n < 3) throw std::invalid_argument("fit_leading_exponent: need at least 3 points");

    FitResult r;
    std::vector<double> w(n);
    r.x.resize(n);
    r.y.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double N = points[i].n;
        const double l1 = points[i].lambda1;
        if (!(N >= 2) || !(l1 > 0))
            throw std::invalid_argument("fit_leading_exponent: need N >= 2 and lambda1 > 0");
        r.x[i] = std::log(4 * pi * N * std::numbers::e);
        r.y[i] = std::log(8 * pi / l1 * std::sqrt(std::log(N)));
        w[i] = N * N;
    }

    const detail::WlsFit fit = detail::weighted_linear_fit(r.x, r.y, w);
    r.gradient = fit.gradient;
    r.intercept = fit.intercept;
    r.gradient_ci_low = fit.gradient_ci_low;
    r.gradient_ci_high = fit.gradient_ci_high;
    r.r_squared_adjusted = fit.r_squared_adjusted;
    r.residuals = fit.residuals;
    return r;
}

} // namespace hankel
