#include "hankel/asymptotics.hpp"

#include "reference_data.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using hankel::fit_leading_exponent;
using hankel::FitPoint;
using hankel::predict;

TEST_CASE("prediction closed forms at N = 500") {
    const auto p = predict(500);
    CHECK(p.lambda1_leading == doctest::Approx(0.12661054423150902).epsilon(1e-12));
    CHECK(p.lambda1_saddle == doctest::Approx(0.12620475459092755).epsilon(1e-12));
    CHECK(p.lambda1_nlo == doctest::Approx(0.12220516514260638).epsilon(1e-12));
    CHECK(p.lambda1_conjecture_old == doctest::Approx(0.15855064534103039).epsilon(1e-12));
    CHECK(p.sumK_leading == doctest::Approx(49.626082450847858).epsilon(1e-12));
    CHECK(p.sumK_nlo == doctest::Approx(51.358616043364606).epsilon(1e-12));
}

TEST_CASE("prediction closed forms at N = 4500") {
    const auto p = predict(4500);
    CHECK(p.lambda1_leading == doctest::Approx(0.036367936977535135).epsilon(1e-12));
    CHECK(p.lambda1_saddle == doctest::Approx(0.036281859286685484).epsilon(1e-12));
    CHECK(p.lambda1_nlo == doctest::Approx(0.035433058422934059).epsilon(1e-12));
}

TEST_CASE("leading lambda1 and the kernel-sum lower bound are one identity") {
    for (int n : {2, 10, 500, 4500, 100000}) {
        const auto p = predict(n);
        CHECK(p.lower_bound == doctest::Approx(p.lambda1_leading).epsilon(1e-13));
        CHECK(p.lambda1_leading * p.sumK_leading ==
              doctest::Approx(2 * std::numbers::pi).epsilon(1e-13));
    }
}

TEST_CASE("old conjecture and saddle form differ only in the log argument") {
    using std::numbers::e;
    using std::numbers::pi;
    for (int n : {5, 50, 500, 5000}) {
        const auto p = predict(n);
        const double ratio = p.lambda1_conjecture_old / p.lambda1_saddle;
        const double logs =
            std::sqrt(std::log(4 * pi * std::exp(-1 - pi / 2) * n) / std::log(4 * pi * n * e));
        CHECK(ratio * logs == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("leading-order ratio against the reference eigenvalues") {
    // The ratio drops from ~1.0510 to a minimum at N = 2000 and then creeps
    // back up by a few 1e-4; it stays within 6% throughout.
    double prev = 1e9;
    for (size_t i = 0; i < testdata::kReferenceRows.size(); ++i) {
        const auto& row = testdata::kReferenceRows[i];
        const double ratio = predict(row.n).lambda1_leading / row.lambda1;
        CHECK(ratio > 1.0);
        CHECK(ratio < 1.06);
        if (row.n <= 2000) {
            CHECK(ratio < prev);
            prev = ratio;
        }
    }
    const double r2000 = predict(2000).lambda1_leading / testdata::kReferenceRows[3].lambda1;
    const double r4500 = predict(4500).lambda1_leading / testdata::kReferenceRows[8].lambda1;
    CHECK(r2000 == doctest::Approx(1.0451092).epsilon(1e-4));
    CHECK(r4500 == doctest::Approx(1.0454716).epsilon(1e-4));
}

TEST_CASE("weighted fit reproduces the reference gradient") {
    const auto fit = fit_leading_exponent(testdata::reference_fit_points());
    CHECK(std::abs(fit.gradient - 0.63646) < 5e-4);
    CHECK(std::abs(fit.intercept - 0.04630) < 5e-3);
    CHECK(fit.gradient == doctest::Approx(0.6364562674).epsilon(1e-7));
    CHECK(fit.intercept == doctest::Approx(0.0462950367).epsilon(1e-5));
    CHECK(fit.gradient_ci_low <= 2 / std::numbers::pi);
    CHECK(fit.gradient_ci_high >= 2 / std::numbers::pi);
    CHECK(fit.gradient_ci_low == doctest::Approx(0.635542).epsilon(2e-5));
    CHECK(fit.gradient_ci_high == doctest::Approx(0.637370).epsilon(2e-5));
    CHECK(fit.r_squared_adjusted == doctest::Approx(0.99999705).epsilon(1e-6));

    // residual magnitudes shrink by more than an order of magnitude overall,
    // with the largest residual at the smallest N (the fine structure is not
    // strictly monotone)
    double max_abs = 0;
    for (double r : fit.residuals) max_abs = std::max(max_abs, std::abs(r));
    CHECK(max_abs == std::abs(fit.residuals.front()));
    CHECK(std::abs(fit.residuals.back()) < std::abs(fit.residuals.front()) / 10);
}

TEST_CASE("noiseless line is recovered exactly") {
    using std::numbers::pi;
    std::vector<FitPoint> pts;
    for (int n = 500; n <= 4500; n += 500) {
        const double x = std::log(4 * pi * n * std::numbers::e);
        const double y = 0.1 + (2 / pi) * x;
        // invert the y transform: lambda1 = 8 pi sqrt(log N) e^{-y}
        pts.push_back({double(n), 8 * pi * std::sqrt(std::log(n)) * std::exp(-y)});
    }
    const auto fit = fit_leading_exponent(pts);
    CHECK(fit.gradient == doctest::Approx(2 / pi).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.1).epsilon(1e-10));
    CHECK(fit.r_squared_adjusted == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: fit is invariant under weight rescaling") {
    const auto pts = testdata::reference_fit_points();
    std::vector<double> x, y, w;
    for (const auto& p : pts) {
        x.push_back(std::log(4 * std::numbers::pi * p.n * std::numbers::e));
        y.push_back(std::log(8 * std::numbers::pi / p.lambda1 * std::sqrt(std::log(p.n))));
        w.push_back(p.n * p.n);
    }
    const auto base = hankel::detail::weighted_linear_fit(x, y, w);
    for (double scale : {1e-6, 0.5, 3.0, 1e8}) {
        auto ws = w;
        for (double& wi : ws) wi *= scale;
        const auto fit = hankel::detail::weighted_linear_fit(x, y, ws);
        CHECK(fit.gradient == doctest::Approx(base.gradient).epsilon(1e-12));
        CHECK(fit.intercept == doctest::Approx(base.intercept).epsilon(1e-12));
        CHECK(fit.gradient_ci_low == doctest::Approx(base.gradient_ci_low).epsilon(1e-12));
        CHECK(fit.gradient_ci_high == doctest::Approx(base.gradient_ci_high).epsilon(1e-12));
    }
}

TEST_CASE("fit input validation") {
    CHECK_THROWS_AS(fit_leading_exponent({{500, 0.1}, {1000, 0.08}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_leading_exponent({{500, 0.1}, {1000, -0.08}, {1500, 0.06}}),
                    std::invalid_argument);
    // identical abscissae
    CHECK_THROWS_AS(fit_leading_exponent({{500, 0.1}, {500, 0.11}, {500, 0.12}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(predict(1), std::invalid_argument);
}
