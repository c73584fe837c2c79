// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gkl/hurwitz.hpp"
#include "gkl/measure.hpp"
#include "gkl/rng.hpp"
#include "gkl/transfer.hpp"
#include "oracles.hpp"

namespace {

gkl::FuncRep eta(std::uint64_t p) {
    const gkl::InvariantMeasure mu{gkl::MapParams{p}};
    return gkl::from_callable([&](double x) { return mu.density(x); });
}

}  // namespace

TEST_CASE("invariant density is a fixed point") {
    gkl::TruncationPolicy pol;
    pol.tail_tol = 1e-12;
    for (const std::uint64_t p : {1ULL, 2ULL, 5ULL, 10ULL}) {
        const auto e = eta(p);
        const auto g = gkl::apply_transfer(p, e, pol);
        const auto diff = gkl::combine(g, e, [](double a, double b) { return a - b; });
        CHECK(diff.sup_norm() <= 1e-12);
    }
}

TEST_CASE("transfer of a constant against brute force") {
    // G_p 1 (x) = p zeta(2, p + x); compare against a long branch sum with its
    // integral tail.
    const auto one = gkl::from_callable([](double) { return 1.0; });
    for (const std::uint64_t p : {1ULL, 3ULL}) {
        const auto g = gkl::apply_transfer(p, one);
        for (const double x : {0.0, 0.3, 1.0}) {
            const auto br = gkl::oracle::zeta_bracket(2, static_cast<long double>(p) + x, 200000);
            const double expect = static_cast<double>(p * br.mid());
            CHECK(g.evaluate(x) == Catch::Approx(expect).epsilon(1e-13));
        }
    }
}

TEST_CASE("transfer of x against brute-force branch sums") {
    const auto id = gkl::from_callable([](double x) { return x; });
    const std::uint64_t p = 2;
    const auto g = gkl::apply_transfer(p, id);
    for (const double x : {0.0, 0.5, 0.9}) {
        const long double head = gkl::oracle::branch_sum(p, x, 100000, [](long double y) { return y; });
        // Tail p^2 sum_{k > K} (k+x)^{-3} from the bracket.
        const auto tail = gkl::oracle::zeta_bracket(3, 100001.0L + x, 100000);
        const double expect = static_cast<double>(head + 4.0L * tail.mid());
        CHECK(g.evaluate(x) == Catch::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("integral preservation on random polynomials") {
    gkl::Xoshiro256 gen{99};
    for (const std::uint64_t p : {1ULL, 2ULL, 5ULL}) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> c(1 + gen() % 11);
            for (auto& v : c) v = 2.0 * gen.uniform() - 1.0;
            const auto f = gkl::from_callable([&](double x) {
                double acc = 0.0;
                for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
                return acc;
            });
            const auto g = gkl::apply_transfer(p, f);
            CHECK(std::abs(g.integral() - f.integral()) <= 1e-12);
        }
    }
}

TEST_CASE("certified tail bound and automatic cutoff") {
    const auto e = eta(1);
    const auto out = gkl::apply_transfer_bounded(1, e);
    CHECK(out.tail_bound <= 1e-14);
    CHECK(out.k_max >= 100);
    gkl::TruncationPolicy fixed;
    fixed.k_max = 100;
    fixed.taylor_order = 3;
    fixed.tail_tol = 1e-12;
    CHECK_THROWS_AS(gkl::apply_transfer(1, e, fixed), gkl::UnachievablePrecision);
    fixed.taylor_order = 4;
    fixed.tail_tol = 1e-10;
    CHECK_NOTHROW(gkl::apply_transfer(1, e, fixed));
}

TEST_CASE("policy validation") {
    const auto e = eta(1);
    gkl::TruncationPolicy bad;
    bad.taylor_order = 5;
    CHECK_THROWS_AS(gkl::apply_transfer(1, e, bad), std::invalid_argument);
    bad = {};
    bad.k_max = 50;
    CHECK_THROWS_AS(gkl::apply_transfer(1, e, bad), std::invalid_argument);
    bad = {};
    bad.tail_tol = 0.0;
    CHECK_THROWS_AS(gkl::apply_transfer(1, e, bad), std::invalid_argument);
    CHECK_THROWS_AS(gkl::apply_transfer(0, e), std::invalid_argument);
}

TEST_CASE("substitution round trip") {
    const auto f = gkl::from_callable([](double x) { return std::cos(x); });
    const auto g = gkl::g_substitution(3, f);
    CHECK(g.evaluate(0.5) == Catch::Approx(3.5 * std::cos(0.5)).epsilon(1e-14));
    const auto back = gkl::g_substitution_inverse(3, g);
    for (std::size_t j = 0; j < f.values().size(); ++j) {
        CHECK(back.values()[j] == Catch::Approx(f.values()[j]).epsilon(1e-15));
    }
    // The invariant density becomes a constant.
    const auto ge = gkl::g_substitution(2, eta(2));
    CHECK(ge.sup_norm() == Catch::Approx(1.0 / std::log1p(0.5)).epsilon(1e-14));
}

TEST_CASE("proof diagnostics") {
    for (const std::uint64_t p : {1ULL, 2ULL, 5ULL, 10ULL}) {
        for (const double x : {0.0, 0.37, 1.0}) {
            // sum_k h_k(x) telescopes to 1.
            long double sum = 0.0L;
            for (std::uint64_t k = p; k < p + 2000000; ++k) sum += gkl::diagnostics(p, k, x).h;
            const long double tail = (p + x) / (p + 2000000 + x);
            CHECK(std::abs(static_cast<double>(sum + tail) - 1.0) < 1e-12);
            for (std::uint64_t k = p; k < p + 50; ++k) {
                const auto d = gkl::diagnostics(p, k, x);
                const double kd = static_cast<double>(k);
                CHECK(std::abs(d.h_prime) <= 3.0 / (kd * (kd + 1.0)));
                CHECK(d.d >= 0.0);
                CHECK(d.g_kx < 0.0);
            }
        }
    }
    CHECK_THROWS_AS(gkl::diagnostics(3, 2, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(gkl::diagnostics(1, 1, 2.0), std::domain_error);
}

TEST_CASE("h_prime matches finite differences of h") {
    for (const std::uint64_t k : {1ULL, 2ULL, 10ULL}) {
        const double x = 0.4;
        const double step = 1e-5;
        const auto hp = gkl::diagnostics(1, k, x + step).h;
        const auto hm = gkl::diagnostics(1, k, x - step).h;
        CHECK(gkl::diagnostics(1, k, x).h_prime == Catch::Approx((hp - hm) / (2 * step)).epsilon(1e-8));
    }
}

TEST_CASE("Q(x) at zero is Q_p and nonincreasing") {
    for (const std::uint64_t p : {1ULL, 2ULL, 5ULL, 10ULL}) {
        const auto q = gkl::q_constant(p, 1e-12);
        CHECK(std::abs(gkl::q_of_x(p, 0.0) - q.value) <= 1e-12);
        double prev = gkl::q_of_x(p, 0.0);
        for (int i = 1; i <= 20; ++i) {
            const double v = gkl::q_of_x(p, i / 20.0);
            CHECK(v <= prev + 1e-14);
            prev = v;
        }
    }
}

TEST_CASE("D_k expansion reproduces D_k for large k") {
    const double a = 1.3;
    const auto e = gkl::detail::d_k_expansion(a, 6);
    CHECK(e[2] == Catch::Approx(1.0 / a).epsilon(1e-15));
    // p = 1, x = 0.3, k = 1000
    const double u = 1000.3;
    double series = 0.0;
    for (int n = 2; n <= 6; ++n) series += e[n] * std::pow(u, -n);
    const double exact = gkl::d_k(1, 1000, 0.3);
    CHECK(std::abs(series - exact) <= gkl::detail::d_k_tail_bound(a, u) + 1e-22);
}

TEST_CASE("transfer examples") {
    const auto one = gkl::from_callable([](double) { return 1.0; });
    CHECK(gkl::apply_transfer(1, one).evaluate(0.0) ==
          Catch::Approx(1.6449340668482264).epsilon(1e-14));
    CHECK(gkl::d_k(1, 1, 0.0) == 0.5);

    // Zero iterations return the input.
    const auto f = gkl::from_callable([](double x) { return std::exp(-x); });
    const auto same = gkl::iterate_transfer(2, f, 0);
    for (std::size_t j = 0; j < f.values().size(); ++j) CHECK(same.values()[j] == f.values()[j]);

    // The invariant density drifts by at most n tail tolerances.
    for (const std::uint64_t p : {1ULL, 3ULL}) {
        const auto e = eta(p);
        const auto it = gkl::iterate_transfer(p, e, 10);
        const auto diff = gkl::combine(it, e, [](double a, double b) { return a - b; });
        CHECK(diff.sup_norm() <= 10 * 1e-10);
    }

    // Convergence from the constant density at rate Q_1.
    const auto e1 = eta(1);
    const double start = gkl::combine(one, e1, [](double a, double b) { return a - b; }).sup_norm();
    const auto it = gkl::iterate_transfer(1, one, 30);
    const double end = gkl::combine(it, e1, [](double a, double b) { return a - b; }).sup_norm();
    CHECK(end <= start * std::pow(gkl::q_constant(1, 1e-12).value, 30) + 1e-11);

    const auto zero = gkl::from_callable([](double) { return 0.0; });
    CHECK(gkl::g_substitution(4, zero).sup_norm() == 0.0);
}
