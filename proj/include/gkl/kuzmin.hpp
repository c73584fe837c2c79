// SPDX-License-Identifier: Apache-2.0
#pragma once

// Gauss-Kuzmin iterates phi_{p,n}(x) = m(T_p^{-n}[0,x]), their distance to
// the invariant distribution Phi_p, and the empirical exponential decay rate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gkl/compensated.hpp"
#include "gkl/error.hpp"
#include "gkl/funcspace.hpp"
#include "gkl/hurwitz.hpp"
#include "gkl/measure.hpp"
#include "gkl/transfer.hpp"

namespace gkl {

inline constexpr double kDefaultResidualFloor = 1.0e-12;
inline constexpr int kDefaultGridSize = 33;

/// phi_{p,n} and Delta_{p,n} = phi_{p,n} - Phi_p sampled on a grid.
struct IterateRecord {
    std::uint64_t p{1};
    std::size_t n{0};
    std::vector<double> grid;
    std::vector<double> phi;
    std::vector<double> delta;
    double sup_delta{0.0};
};

/// Q_p, its closed-form bounds, and the log-linear fit of sup|Delta_{p,n}|.
struct RateReport {
    std::uint64_t p{1};
    double q_p{0.0};
    double q_err{0.0};
    double q_lower{0.0};
    double q_upper{0.0};
    double fitted_rate{std::numeric_limits<double>::quiet_NaN()};
    std::pair<std::size_t, std::size_t> fit_window{0, 0};
    double residual_floor{kDefaultResidualFloor};
    /// False when fewer than four n fall inside the fit window.
    bool usable{false};
    std::string note;
    /// sup_delta for n = 0..n_max.
    std::vector<double> sup_delta;
};

/// n equispaced points on [0,1], endpoints included.
inline std::vector<double> uniform_grid(int n = kDefaultGridSize) {
    detail::require(n >= 2, "uniform_grid: need at least two points");
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = static_cast<double>(i) / (n - 1);
    g.back() = 1.0;
    return g;
}

namespace detail {

inline void check_grid(const std::vector<double>& grid) {
    require(!grid.empty(), "grid must be non-empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require_unit(grid[i], "grid points must lie in [0,1]");
        require(i == 0 || grid[i - 1] <= grid[i], "grid must be sorted");
    }
}

inline IterateRecord make_record(std::uint64_t p, std::size_t n, const std::vector<double>& grid,
                                 std::vector<double> phi) {
    const InvariantMeasure mu{MapParams{p}};
    IterateRecord rec;
    rec.p = p;
    rec.n = n;
    rec.grid = grid;
    rec.phi = std::move(phi);
    rec.delta.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        rec.delta[i] = rec.phi[i] - mu.cdf(grid[i]);
        rec.sup_delta = std::max(rec.sup_delta, std::abs(rec.delta[i]));
    }
    return rec;
}

}  // namespace detail

/// phi_{p,n} for n = 0..n_max along the density path: phi'_0 = 1,
/// phi'_{n+1} = G_p phi'_n, phi_n(x) = int_0^x phi'_n.
inline std::vector<IterateRecord> phi_sequence(std::uint64_t p, std::size_t n_max,
                                               const std::vector<double>& grid,
                                               const TruncationPolicy& policy = {},
                                               int degree = kDefaultDegree) {
    detail::check_grid(grid);
    policy.validate(p);
    std::vector<IterateRecord> out;
    out.reserve(n_max + 1);
    out.push_back(detail::make_record(p, 0, grid, grid));

    FuncRep density = from_callable([](double) { return 1.0; }, degree);
    for (std::size_t n = 1; n <= n_max; ++n) {
        density = apply_transfer(p, density, policy);
        const FuncRep phi_rep = density.antiderivative();
        std::vector<double> phi(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) phi[i] = phi_rep.evaluate(grid[i]);
        out.push_back(detail::make_record(p, n, grid, std::move(phi)));
    }
    return out;
}

inline IterateRecord phi_iterate(std::uint64_t p, std::size_t n, const std::vector<double>& grid,
                                 const TruncationPolicy& policy = {},
                                 int degree = kDefaultDegree) {
    return phi_sequence(p, n, grid, policy, degree).back();
}

namespace detail {

// sum_{k>=q} (k^{-j} - (k+x)^{-j}) for j >= 1.
inline double power_difference_tail(int j, double q, double x, double tol) {
    if (j == 1) return digamma_difference(q, x).value;
    const double floor = 8.0 * kEps * zeta_upper_bound(j, q);
    const double t = std::max(tol, floor);
    return hurwitz_zeta_shifted(j, q, t).value - hurwitz_zeta_shifted(j, q + x, t).value;
}

// One step of phi_{n}(x) = sum_{k>=p} (phi_{n-1}(p/k) - phi_{n-1}(p/(k+x))) at
// every point of xs, with the branches past K closed through the Taylor
// polynomial of phi_{n-1} at 0. The remainder per branch is at most
// sup|phi^{(m+1)}|/m! (p/k)^m p x/(k(k+x)), which sums to the bound below.
inline std::vector<double> recursion_step(std::uint64_t p, const FuncRep& prev,
                                          std::span<const double> xs,
                                          const TruncationPolicy& policy) {
    const int order = policy.taylor_order;
    const double pd = static_cast<double>(p);
    const double sup_deriv = prev.derivative_sup_bound(order + 1) / factorial(order);
    const auto [k_max, bound] = resolve_cutoff(
        p, policy,
        [&](std::uint64_t k) {
            return sup_deriv * int_pow(pd, order + 1) *
                   zeta_upper_bound(order + 2, static_cast<double>(k) + 1.0);
        },
        "phi_recursion_direct");
    (void)bound;

    std::vector<double> at_knots(k_max - p + 1);
    for (std::uint64_t k = p; k <= k_max; ++k) {
        at_knots[k - p] = prev.eval_unchecked(pd / static_cast<double>(k));
    }
    const std::vector<double> taylor = prev.taylor_at_zero(order);
    const double q = static_cast<double>(k_max) + 1.0;

    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        CompensatedSum<double> acc;
        for (std::uint64_t k = k_max; k >= p; --k) {
            acc += at_knots[k - p];
            acc -= prev.eval_unchecked(pd / (static_cast<double>(k) + x));
        }
        for (int j = 1; j <= order; ++j) {
            const double coef = taylor[j] * int_pow(pd, j);
            if (coef == 0.0) continue;
            const double need = 0.01 * policy.tail_tol / (order * std::abs(coef));
            acc += coef * power_difference_tail(j, q, x, need);
        }
        out[i] = acc.value();
        if (!std::isfinite(out[i])) throw NonFiniteValue("phi_recursion_direct: non-finite value");
    }
    return out;
}

}  // namespace detail

/// phi_{p,n} from the set recursion itself, nested n <= 3 times; a check on
/// the density path of phi_iterate.
inline IterateRecord phi_recursion_direct(std::uint64_t p, std::size_t n,
                                          const std::vector<double>& grid,
                                          const TruncationPolicy& policy = {},
                                          int degree = kDefaultDegree) {
    detail::require(n <= 3, "phi_recursion_direct: n must be <= 3");
    detail::check_grid(grid);
    policy.validate(p);
    if (n == 0) return detail::make_record(p, 0, grid, grid);

    FuncRep prev = from_callable([](double x) { return x; }, degree);
    for (std::size_t level = 1; level < n; ++level) {
        prev = FuncRep{detail::recursion_step(p, prev, prev.nodes(), policy)};
    }
    return detail::make_record(p, n, grid, detail::recursion_step(p, prev, grid, policy));
}

/// sup over the grid of |phi_{p,n} - Phi_p|.
inline double delta_sup(std::uint64_t p, std::size_t n, const std::vector<double>& grid,
                        const TruncationPolicy& policy = {}) {
    return phi_iterate(p, n, grid, policy).sup_delta;
}

/// Least-squares slope of ln sup_delta against n over the n with
/// sup_delta in (residual_floor, 0.1), reported as the rate exp(slope).
inline RateReport fit_rate_from(std::uint64_t p, const std::vector<double>& sup_delta,
                                double residual_floor = kDefaultResidualFloor) {
    RateReport rep;
    rep.p = p;
    rep.residual_floor = residual_floor;
    rep.sup_delta = sup_delta;
    const BoundedValue q = q_constant(p, std::max(1.0e-12, attainable_q_tol(p)));
    const QpBounds qb = q_bounds(p);
    rep.q_p = q.value;
    rep.q_err = q.err;
    rep.q_lower = qb.lower;
    rep.q_upper = qb.upper;

    // Contiguous window: starts at the first n below 0.1, stops at the floor.
    std::size_t lo = 0;
    while (lo < sup_delta.size() && !(sup_delta[lo] < 0.1)) ++lo;
    std::size_t hi = lo;
    while (hi < sup_delta.size() && sup_delta[hi] > residual_floor && sup_delta[hi] < 0.1) ++hi;

    const std::size_t count = hi - lo;
    if (count < 4) {
        rep.note = "fit window holds " + std::to_string(count) + " points; need 4";
        if (count > 0) rep.fit_window = {lo, hi - 1};
        return rep;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t n = lo; n < hi; ++n) {
        const double x = static_cast<double>(n);
        const double y = std::log(sup_delta[n]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double c = static_cast<double>(count);
    const double slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
    rep.fitted_rate = std::exp(slope);
    rep.fit_window = {lo, hi - 1};
    rep.usable = true;
    return rep;
}

inline RateReport fit_decay_rate(std::uint64_t p, std::size_t n_max,
                                 const std::vector<double>& grid,
                                 const TruncationPolicy& policy = {},
                                 double residual_floor = kDefaultResidualFloor) {
    detail::require(n_max >= 5, "fit_decay_rate: n_max must be >= 5");
    const auto seq = phi_sequence(p, n_max, grid, policy);
    std::vector<double> sup;
    sup.reserve(seq.size());
    for (const auto& rec : seq) sup.push_back(rec.sup_delta);
    return fit_rate_from(p, sup, residual_floor);
}

}  // namespace gkl
