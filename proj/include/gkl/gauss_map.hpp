// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gkl/error.hpp"
#include "gkl/rng.hpp"

namespace gkl {

/// T_p(x) = {p/x}, with T_p(0) = 0.
inline double t_apply(std::uint64_t p, double x) {
    if (std::isnan(x)) throw std::domain_error("t_apply: NaN input");
    detail::require_unit(x, "t_apply: x must be in [0,1]");
    if (x == 0.0) return 0.0;
    const double q = static_cast<double>(p) / x;
    // Past 2^53 every double is an integer, including +inf from subnormal x.
    if (!(q < 0x1.0p53)) return 0.0;
    return q - std::floor(q);
}

/// A finite orbit x0, T(x0), ... and the digits floor(p / x_i).
struct OrbitRecord {
    std::uint64_t p{1};
    double x0{0.0};
    std::vector<double> points;
    std::vector<std::uint64_t> digits;
};

namespace detail {

inline std::uint64_t digit_of(double p, double x) {
    const double q = std::floor(p / x);
    // Clamped for x so small that p/x leaves the integer range.
    if (!(q < 0x1.0p64)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(q);
}

}  // namespace detail

/// Iterates T_p n times from x0, stopping early at an exact 0.
inline OrbitRecord orbit(std::uint64_t p, double x0, std::size_t n) {
    OrbitRecord rec;
    rec.p = p;
    rec.x0 = x0;
    rec.points.reserve(n + 1);
    rec.digits.reserve(n);
    double x = x0;
    rec.points.push_back(x);
    const double pd = static_cast<double>(p);
    for (std::size_t i = 0; i < n && x != 0.0; ++i) {
        rec.digits.push_back(detail::digit_of(pd, x));
        x = t_apply(p, x);
        rec.points.push_back(x);
    }
    return rec;
}

/// Number of samples handled by worker w out of `workers`.
inline std::uint64_t worker_share(std::uint64_t samples, unsigned workers, unsigned w) {
    return samples / workers + (w < samples % workers ? 1 : 0);
}

/// Monte Carlo estimate of phi_{p,n}(x) = m(T_p^{-n}([0,x])).
///
/// Worker w draws its share of the uniform samples from the xoshiro256**
/// stream seeded with `seed` and jumped w times; counts are summed exactly,
/// so the estimate is bit-identical for a fixed (seed, samples, workers).
inline double phi_monte_carlo(std::uint64_t p, std::size_t n, double x,
                              std::uint64_t samples, std::uint64_t seed,
                              unsigned workers = 1) {
    detail::require_unit(x, "phi_monte_carlo: x must be in [0,1]");
    detail::require(samples >= 1, "phi_monte_carlo: samples must be >= 1");
    detail::require(workers >= 1, "phi_monte_carlo: workers must be >= 1");

    auto count_hits = [p, n, x](Xoshiro256 gen, std::uint64_t draws) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < draws; ++i) {
            double u = gen.uniform();
            for (std::size_t step = 0; step < n && u != 0.0; ++step) {
                u = t_apply(p, u);
            }
            if (u <= x) ++hits;
        }
        return hits;
    };

    std::vector<std::uint64_t> hits(workers, 0);
    if (workers == 1) {
        hits[0] = count_hits(Xoshiro256{seed}, samples);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                hits[w] = count_hits(Xoshiro256::stream(seed, w),
                                     worker_share(samples, workers, w));
            });
        }
        for (auto& t : pool) t.join();
    }
    std::uint64_t total = 0;
    for (const auto h : hits) total += h;
    return static_cast<double>(total) / static_cast<double>(samples);
}

}  // namespace gkl
