#include "hankel/moments.hpp"

#include "rational_oracle.hpp"

#include <doctest.h>

#include <cmath>

using hankel::FixScalar;
using hankel::WeightSpec;

TEST_CASE("WeightSpec admits exactly the half-integral gamma grid") {
    CHECK(WeightSpec::make(1, 2).doubled_inverse() == 4); // beta = 1/2
    CHECK(WeightSpec::make(1, 1).doubled_inverse() == 2); // beta = 1
    CHECK(WeightSpec::make(2, 1).doubled_inverse() == 1); // beta = 2
    CHECK(WeightSpec::make(2, 3).doubled_inverse() == 3); // beta = 2/3
    CHECK(WeightSpec::make(1, 3).doubled_inverse() == 6); // beta = 1/3
    CHECK_THROWS_AS(WeightSpec::make(3, 1), std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec::make(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(WeightSpec::make(0, 1), std::invalid_argument);
}

TEST_CASE("pi and sqrt(pi) mantissas match reference digits") {
    CHECK(hankel::detail::pi_scaled(64) == mpz_class("57952155664616982739"));
    CHECK(hankel::detail::sqrt_pi_scaled(64) == mpz_class("32696002570115000953"));
    CHECK(hankel::detail::sqrt_pi_scaled(128) ==
          mpz_class("603134791644261162232608214451700185151"));
}

TEST_CASE("gamma at integer arguments is an exact factorial") {
    CHECK(hankel::gamma_exact(4, 64) == FixScalar::from_integer(1, 0));    // Gamma(2)
    CHECK(hankel::gamma_exact(12, 256) == FixScalar::from_integer(120, 0)); // Gamma(6)
    CHECK(hankel::gamma_exact(2, 16) == FixScalar::from_integer(1, 0));    // Gamma(1)
}

TEST_CASE("gamma at half-integer arguments tracks sqrt(pi)") {
    // Gamma(1/2) = sqrt(pi)
    const FixScalar g = hankel::gamma_exact(1, 64);
    CHECK(g.mantissa() == mpz_class("32696002570115000953"));
    CHECK(g.to_double() == doctest::Approx(1.7724538509055160273).epsilon(1e-15));
    // Gamma(3/2) = sqrt(pi)/2
    const FixScalar g32 = hankel::gamma_exact(3, 96);
    CHECK(std::abs(g32.to_double() - 1.7724538509055160273 / 2) < 1e-15);
}

TEST_CASE("moments reproduce the closed forms") {
    const WeightSpec half = WeightSpec::make(1, 2);
    CHECK(hankel::moment(half, 0, 64) == FixScalar::from_integer(2, 0));
    CHECK(hankel::moment(half, 2, 64) == FixScalar::from_integer(240, 0));

    const WeightSpec one = WeightSpec::make(1, 1);
    CHECK(hankel::moment(one, 3, 64) == FixScalar::from_integer(6, 0));

    // beta = 2/3: mu_0 = (3/2) Gamma(3/2) = 3 sqrt(pi) / 4
    const WeightSpec tt = WeightSpec::make(2, 3);
    CHECK(hankel::moment(tt, 0, 128).to_double() ==
          doctest::Approx(1.3293403881791370205).epsilon(1e-15));
    CHECK(hankel::moment(tt, 1, 64) == FixScalar::from_integer(3, 0));
}

TEST_CASE("property: beta = 1/2 moments are exactly 2*(2k+1)!") {
    const WeightSpec half = WeightSpec::make(1, 2);
    for (unsigned long k = 0; k <= 40; ++k) {
        CHECK(oracle::to_rational(hankel::moment(half, k, 32)) ==
              oracle::moment_rational(half, k));
    }
}

TEST_CASE("build_hankel lays out the moment view") {
    const WeightSpec half = WeightSpec::make(1, 2);
    const hankel::MomentTable h2 = hankel::build_hankel(half, 2, 64);
    CHECK(h2.entry(0, 0) == FixScalar::from_integer(2, 0));
    CHECK(h2.entry(0, 1) == FixScalar::from_integer(12, 0));
    CHECK(h2.entry(1, 0) == FixScalar::from_integer(12, 0));
    CHECK(h2.entry(1, 1) == FixScalar::from_integer(240, 0));

    const hankel::MomentTable h1 = hankel::build_hankel(half, 1, 64);
    CHECK(h1.entry(0, 0) == FixScalar::from_integer(2, 0));

    const hankel::MomentTable h3 = hankel::build_hankel(half, 3, 64);
    CHECK(h3.entry(0, 2) == FixScalar::from_integer(240, 0));
    CHECK(h3.entry(2, 2) == FixScalar::from_integer(725760, 0));
}

TEST_CASE("hankel view is symmetric and positive") {
    const hankel::MomentTable h = hankel::build_hankel(WeightSpec::make(1, 2), 6, 64);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            CHECK(h.entry(i, j) == h.entry(j, i));
            CHECK(h.entry(i, j).sign() > 0);
        }
    }
}

TEST_CASE("small determinants are positive (positive definiteness)") {
    for (int n = 1; n <= 5; ++n) {
        const auto m = oracle::hankel_matrix(WeightSpec::make(1, 2), n);
        CHECK(sgn(oracle::det_exact(m)) > 0);
    }
}

TEST_CASE("working_column aligns entries exactly") {
    const hankel::MomentTable h = hankel::build_hankel(WeightSpec::make(1, 2), 4, 32);
    const auto col = h.working_column(1, 64);
    REQUIRE(col.size() == 3);
    for (int r = 0; r < 3; ++r) {
        CHECK(col[size_t(r)].frac_bits() == 64);
        CHECK(col[size_t(r)] == h.entry(r + 1, 1));
    }
}

TEST_CASE("condition estimate matches the factorial growth") {
    const WeightSpec half = WeightSpec::make(1, 2);
    const auto c2 = hankel::condition_estimate(half, 2);
    // lambda_max ~ 2 Gamma(6) = 240, the largest diagonal entry
    CHECK(std::exp2(c2.log2_lambda_max) == doctest::Approx(240.0).epsilon(1e-12));
    CHECK(c2.log2_cond == doctest::Approx(std::log2(2400.0)).epsilon(1e-12));

    // general N: lambda_max estimate = 2 * (4N-3)!
    for (int n : {3, 5, 9, 20}) {
        mpz_class f;
        mpz_fac_ui(f.get_mpz_t(), unsigned(4 * n - 3));
        f *= 2;
        signed long exp2 = 0;
        const double d = mpz_get_d_2exp(&exp2, f.get_mpz_t());
        const double log2_exact = std::log2(d) + double(exp2);
        CHECK(hankel::condition_estimate(half, n).log2_lambda_max ==
              doctest::Approx(log2_exact).epsilon(1e-10));
    }
}
