// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gkl/kuzmin.hpp"
#include "oracles.hpp"

TEST_CASE("uniform grid") {
    const auto g = gkl::uniform_grid(5);
    CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK_THROWS_AS(gkl::uniform_grid(1), std::invalid_argument);
}

TEST_CASE("phi_{p,1} is p times a digamma difference") {
    const std::vector<double> xs{0.25, 0.5, 0.75};
    const double p1[] = {0.349762131525267453, 0.613705638880109381, 0.824688118448394024};
    // p (psi(p+x) - psi(p)) at p = 2
    const double p2[] = {0.299524263050534905, 0.560744611093552096, 0.792233379753930906};
    const auto r1 = gkl::phi_iterate(1, 1, xs);
    const auto r2 = gkl::phi_iterate(2, 1, xs);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(r1.phi[i] - p1[i]) < 1e-13);
        CHECK(std::abs(r2.phi[i] - p2[i]) < 1e-13);
    }
}

TEST_CASE("n = 0 is the identity") {
    const auto g = gkl::uniform_grid();
    const auto r = gkl::phi_iterate(1, 0, g);
    CHECK(r.phi == g);
    // sup |x - Phi_1(x)| is attained at 1/ln 2 - 1.
    const auto [xm, fm] = gkl::oracle::golden_max(
        [](double x) { return std::log2(1.0 + x) - x; }, 0.0, 1.0);
    CHECK(xm == Catch::Approx(0.442695040888963407).epsilon(1e-7));
    CHECK(fm == Catch::Approx(0.0860713320559342069).epsilon(1e-12));
    CHECK(r.sup_delta <= fm);
    CHECK(r.sup_delta > 0.08);
}

TEST_CASE("iterates stay distribution functions") {
    const auto g = gkl::uniform_grid();
    for (const auto& rec : gkl::phi_sequence(2, 8, g)) {
        CHECK(rec.phi.front() == Catch::Approx(0.0).margin(1e-15));
        CHECK(rec.phi.back() == Catch::Approx(1.0).epsilon(1e-13));
        for (std::size_t i = 1; i < rec.phi.size(); ++i) CHECK(rec.phi[i] >= rec.phi[i - 1]);
    }
}

TEST_CASE("direct recursion agrees with the density path") {
    const auto g = gkl::uniform_grid(11);
    for (const std::uint64_t p : {1ULL, 2ULL, 5ULL}) {
        for (std::size_t n = 0; n <= 3; ++n) {
            const auto a = gkl::phi_iterate(p, n, g);
            const auto b = gkl::phi_recursion_direct(p, n, g);
            for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(a.phi[i] - b.phi[i]) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(gkl::phi_recursion_direct(1, 4, g), std::invalid_argument);
}

TEST_CASE("decay rate lies below Q_p") {
    const auto g = gkl::uniform_grid();
    for (const std::uint64_t p : {1ULL, 2ULL, 5ULL}) {
        const auto rep = gkl::fit_decay_rate(p, 30, g);
        REQUIRE(rep.usable);
        CHECK(rep.fitted_rate <= rep.q_p + 0.05);
        CHECK(rep.fitted_rate > 0.0);
        CHECK(rep.q_lower < rep.q_p);
        CHECK(rep.q_p < rep.q_upper);
    }
    // Classical value for p = 1 (Wirsing): 0.3036630029...
    const auto rep1 = gkl::fit_decay_rate(1, 30, g);
    CHECK(rep1.fitted_rate == Catch::Approx(0.30366).margin(0.02));
}

TEST_CASE("rate fit edge cases") {
    const auto rep = gkl::fit_rate_from(1, {0.5, 0.2, 0.05, 1e-13});
    CHECK_FALSE(rep.usable);
    CHECK_FALSE(rep.note.empty());
    std::vector<double> geo;
    for (int n = 0; n < 12; ++n) geo.push_back(0.09 * std::pow(0.25, n));
    const auto fit = gkl::fit_rate_from(1, geo);
    CHECK(fit.usable);
    CHECK(fit.fitted_rate == Catch::Approx(0.25).epsilon(1e-10));
    CHECK(fit.fit_window.first == 0);
    CHECK_THROWS_AS(gkl::fit_decay_rate(1, 4, gkl::uniform_grid()), std::invalid_argument);
}

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(gkl::phi_iterate(1, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(gkl::phi_iterate(1, 1, {0.5, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(gkl::phi_iterate(1, 1, {1.5}), std::domain_error);
}

TEST_CASE("iterate examples") {
    for (const std::uint64_t p : {1ULL, 2ULL, 7ULL}) {
        for (const std::size_t n : {1u, 4u, 9u}) {
            const auto r = gkl::phi_iterate(p, n, {0.0, 1.0});
            CHECK(std::abs(r.phi[1] - 1.0) <= 1e-10);
            CHECK(std::abs(r.delta[0]) <= 1e-10);
            CHECK(std::abs(r.delta[1]) <= 1e-10);
        }
    }
    CHECK(gkl::phi_iterate(1, 1, {0.5}).phi[0] == Catch::Approx(0.6137056388801094).epsilon(1e-13));
    // Large n: bounded by Q_p^n or the numerical floor.
    const double q2 = gkl::q_constant(2, 1e-12).value;
    CHECK(gkl::delta_sup(2, 25, gkl::uniform_grid()) <= std::max(std::pow(q2, 25), 1e-12));
}
