// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "gkl/measure.hpp"

TEST_CASE("reference values") {
    CHECK(gkl::density_eta(1, 0.5) == Catch::Approx(0.961796693925975605).epsilon(1e-15));
    CHECK(gkl::cdf_phi(2, 0.5) == Catch::Approx(0.550339713213208474).epsilon(1e-15));
    CHECK(gkl::mu_interval(1, 0.0, 0.5) == Catch::Approx(0.584962500721156181).epsilon(1e-15));
    CHECK(gkl::cdf_phi(1, 0.0) == 0.0);
    CHECK(gkl::cdf_phi(7, 1.0) == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("density integrates to the cdf") {
    for (const std::uint64_t p : {1ULL, 3ULL, 40ULL, 123456789ULL}) {
        const gkl::InvariantMeasure mu{gkl::MapParams{p}};
        // Simpson on [0, 1].
        const int m = 2000;
        double acc = mu.density(0.0) + mu.density(1.0);
        for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * mu.density(double(i) / m);
        CHECK(acc / (3.0 * m) == Catch::Approx(1.0).epsilon(1e-12));
        CHECK(mu.cdf(1.0) == Catch::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("large p approaches uniform") {
    const std::uint64_t p = std::uint64_t{1} << 53;
    for (const double x : {0.1, 0.5, 0.9}) {
        CHECK(gkl::cdf_phi(p, x) == Catch::Approx(x).epsilon(1e-12));
        CHECK(gkl::density_eta(p, x) == Catch::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("cdf is monotone and additive") {
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        const double v = gkl::cdf_phi(3, x);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(gkl::mu_interval(2, 0.1, 0.4) + gkl::mu_interval(2, 0.4, 0.9) ==
          Catch::Approx(gkl::mu_interval(2, 0.1, 0.9)).epsilon(1e-14));
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(gkl::MapParams{0}, std::invalid_argument);
    CHECK_THROWS_AS(gkl::MapParams{(std::uint64_t{1} << 53) + 1}, std::invalid_argument);
    CHECK_THROWS_AS(gkl::density_eta(1, -0.1), std::domain_error);
    CHECK_THROWS_AS(gkl::cdf_phi(1, 1.5), std::domain_error);
    CHECK_THROWS_AS(gkl::cdf_phi(1, std::nan("")), std::domain_error);
    CHECK_THROWS_AS(gkl::mu_interval(1, 0.6, 0.2), std::invalid_argument);
}

TEST_CASE("density and interval examples") {
    CHECK(gkl::density_eta(1, 0.0) == Catch::Approx(1.0 / std::log(2.0)).epsilon(1e-15));
    CHECK(gkl::density_eta(1, 1.0) == Catch::Approx(0.5 / std::log(2.0)).epsilon(1e-15));
    CHECK(gkl::mu_interval(4, 0.0, 1.0) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(gkl::mu_interval(4, 0.3, 0.3) == 0.0);
    for (const double x : {0.1, 0.5, 0.9}) {
        CHECK(gkl::cdf_phi(1, x) == Catch::Approx(std::log1p(x) / std::log(2.0)).epsilon(1e-15));
    }
}
