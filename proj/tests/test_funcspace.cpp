// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "gkl/funcspace.hpp"

namespace {

double poly(double x) { return 1.0 - 2.0 * x + 3.0 * x * x * x - 0.5 * std::pow(x, 7); }
double dpoly(double x) { return -2.0 + 9.0 * x * x - 3.5 * std::pow(x, 6); }

}  // namespace

TEST_CASE("nodes are the extremal points on [0,1]") {
    const auto f = gkl::from_callable([](double x) { return x; }, 8);
    const auto nodes = f.nodes();
    REQUIRE(nodes.size() == 9);
    CHECK(nodes.front() == 0.0);
    CHECK(nodes.back() == 1.0);
    CHECK(nodes[4] == Catch::Approx(0.5).epsilon(1e-15));
    for (std::size_t j = 1; j < nodes.size(); ++j) CHECK(nodes[j] > nodes[j - 1]);
}

TEST_CASE("polynomials are reproduced exactly") {
    const auto f = gkl::from_callable(poly, 16);
    for (int i = 0; i <= 50; ++i) {
        const double x = i / 50.0;
        CHECK(f.evaluate(x) == Catch::Approx(poly(x)).margin(1e-14));
    }
    // int poly = 1 - 1 + 3/4 - 1/16
    CHECK(gkl::integral(f) == Catch::Approx(0.6875).epsilon(1e-14));
    const auto df = gkl::differentiate(f);
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        CHECK(df.evaluate(x) == Catch::Approx(dpoly(x)).margin(1e-12));
    }
    const auto anti = f.antiderivative();
    CHECK(anti.degree() == 17);
    CHECK(anti.evaluate(0.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(anti.evaluate(1.0) == Catch::Approx(0.6875).epsilon(1e-14));
}

TEST_CASE("evaluation at nodes returns the stored values") {
    const auto f = gkl::from_callable([](double x) { return std::exp(x); }, 32);
    for (std::size_t j = 0; j < f.nodes().size(); ++j) {
        CHECK(f.evaluate(f.nodes()[j]) == f.values()[j]);
    }
}

TEST_CASE("smooth functions converge spectrally") {
    const auto f = gkl::from_callable([](double x) { return 1.0 / (1.0 + x); }, 64);
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        CHECK(std::abs(f(x) - 1.0 / (1.0 + x)) < 1e-14);
    }
    CHECK(f.integral() == Catch::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(f.sup_norm() == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(f.resolved_length() < 40);
}

TEST_CASE("taylor coefficients and derivative bounds") {
    const auto f = gkl::from_callable([](double x) { return std::exp(2.0 * x); }, 40);
    const auto t = f.taylor_at_zero(4);
    const double expect[] = {1.0, 2.0, 2.0, 4.0 / 3.0, 2.0 / 3.0};
    const double rel[] = {1e-14, 1e-12, 1e-10, 1e-8, 1e-6};
    for (int j = 0; j <= 4; ++j) CHECK(t[j] == Catch::Approx(expect[j]).epsilon(rel[j]));
    // sup |f''| = 4 e^2, up to the interpolation error of the second derivative.
    CHECK(f.derivative_sup_bound(2) >= 4.0 * std::exp(2.0) * (1.0 - 1e-9));
    CHECK(f.derivative_sup_bound(2) <= 4.0 * std::exp(2.0) * 1.5);
}

TEST_CASE("coefficient round trip and combine") {
    const auto f = gkl::from_callable([](double x) { return std::sin(3.0 * x); }, 24);
    const auto g = gkl::FuncRep::from_coefficients(f.coefficients());
    for (std::size_t j = 0; j < f.values().size(); ++j) {
        CHECK(g.values()[j] == Catch::Approx(f.values()[j]).margin(1e-14));
    }
    const auto sum = gkl::combine(f, g, [](double a, double b) { return a - b; });
    CHECK(sum.sup_norm() < 1e-14);
    const auto h = gkl::from_callable([](double x) { return x; }, 12);
    CHECK_THROWS_AS(gkl::combine(f, h, [](double a, double b) { return a + b; }),
                    std::invalid_argument);
}

TEST_CASE("invalid representations") {
    CHECK_THROWS_AS(gkl::FuncRep(std::vector<double>{1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(gkl::FuncRep(std::vector<double>{1.0, std::nan(""), 2.0}), gkl::NonFiniteValue);
    CHECK_THROWS_AS(gkl::from_callable([](double) { return 1.0; }, 1), std::invalid_argument);
    const auto f = gkl::from_callable([](double x) { return x; }, 4);
    CHECK_THROWS_AS(f.evaluate(-0.1), std::domain_error);
    CHECK_THROWS_AS(f.evaluate(1.1), std::domain_error);
}

TEST_CASE("representation examples") {
    const auto one = gkl::from_callable([](double) { return 1.0; }, 10);
    for (const double v : one.values()) CHECK(v == 1.0);
    CHECK(one.sup_norm() == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(gkl::differentiate(one).sup_norm() < 1e-13);

    const auto eta = gkl::from_callable([](double x) { return 1.0 / ((1.0 + x) * std::log(2.0)); }, 64);
    CHECK(std::abs(eta.evaluate(0.5) - 1.0 / (1.5 * std::log(2.0))) <= 1e-12);
    CHECK(eta.sup_norm() == Catch::Approx(1.0 / std::log(2.0)).epsilon(1e-15));

    const auto id = gkl::from_callable([](double x) { return x; }, 2);
    CHECK(id.evaluate(0.3) == Catch::Approx(0.3).epsilon(1e-15));
    CHECK(id.sup_norm() == Catch::Approx(1.0).epsilon(1e-15));
    const auto did = gkl::differentiate(id);
    for (const double v : did.values()) CHECK(v == Catch::Approx(1.0).epsilon(1e-14));

    const auto sq = gkl::from_callable([](double x) { return x * x; }, 3);
    const auto dsq = gkl::differentiate(sq);
    for (int i = 0; i <= 10; ++i) CHECK(std::abs(dsq.evaluate(i / 10.0) - 0.2 * i) <= 1e-12);

    const auto neg = gkl::from_callable([](double) { return -2.5; }, 4);
    CHECK(neg.sup_norm() == Catch::Approx(2.5).epsilon(1e-15));
}
