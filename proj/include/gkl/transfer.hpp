// SPDX-License-Identifier: Apache-2.0
#pragma once

// The transfer operator of T_p,
//
//   (G_p f)(x) = sum_{k>=p} p/(k+x)^2 f(p/(k+x)),
//
// acting on FuncRep, with a certified closure of the infinite branch sum,
// and pointwise evaluators for the quantities h_k, D_k, G(k,x), Q(x) that
// control the contraction of G_p on derivatives.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkl/compensated.hpp"
#include "gkl/error.hpp"
#include "gkl/funcspace.hpp"
#include "gkl/hurwitz.hpp"

namespace gkl {

/// How the branch sum is split into an explicit part and a closed-form tail.
struct TruncationPolicy {
    /// Last explicitly summed branch. 0 selects the smallest value of the
    /// form max(20p, 100) * 2^j whose certified tail bound meets tail_tol.
    std::uint64_t k_max{0};
    /// Order of the Taylor-about-0 expansion used past k_max (0..4).
    int taylor_order{4};
    /// Required bound on the tail remainder at every node. The closure error
    /// has one sign, so it accumulates linearly under iteration.
    double tail_tol{1.0e-14};

    [[nodiscard]] static std::uint64_t min_k_max(std::uint64_t p) {
        return std::max<std::uint64_t>(20 * p, 100);
    }

    void validate(std::uint64_t p) const {
        detail::require(p >= 1, "TruncationPolicy: p must be >= 1");
        detail::require(taylor_order >= 0 && taylor_order <= 4,
                        "TruncationPolicy: taylor_order must be in 0..4");
        detail::require(tail_tol > 0.0, "TruncationPolicy: tail_tol must be positive");
        detail::require(k_max == 0 || k_max >= min_k_max(p),
                        "TruncationPolicy: k_max must be >= max(20p, 100)");
    }
};

/// G_p f together with the cutoff used and its certified tail bound.
struct TransferOutcome {
    FuncRep result;
    std::uint64_t k_max;
    double tail_bound;
};

namespace detail {

inline constexpr std::uint64_t kKMaxCeiling = std::uint64_t{1} << 22;

inline double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline double int_pow(double b, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

// Picks k_max per the policy. `bound_at(K)` is the certified remainder when
// branches up to K are summed explicitly.
template <typename Bound>
std::pair<std::uint64_t, double> resolve_cutoff(std::uint64_t p, const TruncationPolicy& policy,
                                                Bound&& bound_at, const char* who) {
    if (policy.k_max != 0) {
        const double b = bound_at(policy.k_max);
        if (!(b <= policy.tail_tol)) {
            throw UnachievablePrecision(std::string(who) + ": tail_tol unachievable with k_max=" +
                                            std::to_string(policy.k_max),
                                        b);
        }
        return {policy.k_max, b};
    }
    std::uint64_t k = TruncationPolicy::min_k_max(p);
    double b = bound_at(k);
    while (!(b <= policy.tail_tol)) {
        if (k >= kKMaxCeiling) {
            throw UnachievablePrecision(std::string(who) + ": tail_tol unachievable", b);
        }
        k *= 2;
        b = bound_at(k);
    }
    return {k, b};
}

}  // namespace detail

/// Certified bound on the Taylor-closure remainder of G_p f past branch K:
///   sup|f^{(m+1)}|/(m+1)! * p^{m+2} * zeta(m+3, K+1).
inline double transfer_tail_bound(std::uint64_t p, const FuncRep& f, int order, std::uint64_t k) {
    const double c = f.derivative_sup_bound(order + 1) / detail::factorial(order + 1);
    const double pd = static_cast<double>(p);
    return c * detail::int_pow(pd, order + 2) *
           zeta_upper_bound(order + 3, static_cast<double>(k) + 1.0);
}

/// G_p f with the cutoff and certified remainder bound.
///
/// Branches k = p..K are summed explicitly. Past K every image p/(k+x) lies
/// in [0, p/(K+1)], where f is replaced by its Taylor polynomial
/// sum_j a_j y^j; each power then sums in closed form,
///   sum_{k>K} p/(k+x)^2 (p/(k+x))^j = p^{j+1} zeta(j+2, K+1+x).
inline TransferOutcome apply_transfer_bounded(std::uint64_t p, const FuncRep& f,
                                              const TruncationPolicy& policy = {}) {
    policy.validate(p);
    const int order = policy.taylor_order;
    const auto [k_max, bound] = detail::resolve_cutoff(
        p, policy, [&](std::uint64_t k) { return transfer_tail_bound(p, f, order, k); },
        "apply_transfer");

    const std::vector<double> taylor = f.taylor_at_zero(order);
    const double pd = static_cast<double>(p);
    const auto nodes = f.nodes();
    std::vector<double> out(nodes.size());

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        CompensatedSum<double> acc;
        for (std::uint64_t k = k_max; k >= p; --k) {
            const double inv = 1.0 / (static_cast<double>(k) + x);
            const double y = pd * inv;
            acc += pd * inv * inv * f.eval_unchecked(y);
        }
        const double q = static_cast<double>(k_max) + 1.0 + x;
        for (int j = 0; j <= order; ++j) {
            const double coef = taylor[j] * detail::int_pow(pd, j + 1);
            if (coef == 0.0) continue;
            const int s = j + 2;
            const double need = 0.01 * policy.tail_tol / ((order + 1) * std::abs(coef));
            const double floor = 8.0 * kEps * zeta_upper_bound(s, q);
            acc += coef * hurwitz_zeta_shifted(s, q, std::max(need, floor)).value;
        }
        out[i] = acc.value();
        if (!std::isfinite(out[i])) throw NonFiniteValue("apply_transfer: non-finite node value");
    }
    return {FuncRep{std::move(out)}, k_max, bound};
}

/// G_p f on the nodes of f.
inline FuncRep apply_transfer(std::uint64_t p, const FuncRep& f,
                              const TruncationPolicy& policy = {}) {
    return apply_transfer_bounded(p, f, policy).result;
}

/// G_p^n f; n = 0 returns f.
inline FuncRep iterate_transfer(std::uint64_t p, const FuncRep& f, std::size_t n,
                                const TruncationPolicy& policy = {}) {
    FuncRep cur = f;
    for (std::size_t i = 0; i < n; ++i) cur = apply_transfer(p, cur, policy);
    return cur;
}

/// x -> (p + x) f(x) on the nodes.
inline FuncRep g_substitution(std::uint64_t p, const FuncRep& f) {
    const double pd = static_cast<double>(p);
    const auto nodes = f.nodes();
    std::vector<double> out(nodes.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = (pd + nodes[j]) * f.values()[j];
    return FuncRep{std::move(out)};
}

/// Inverse of g_substitution.
inline FuncRep g_substitution_inverse(std::uint64_t p, const FuncRep& g) {
    const double pd = static_cast<double>(p);
    const auto nodes = g.nodes();
    std::vector<double> out(nodes.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = g.values()[j] / (pd + nodes[j]);
    return FuncRep{std::move(out)};
}

/// Pointwise quantities from the derivative contraction argument.
struct ProofDiagnostics {
    std::uint64_t p{1};
    std::uint64_t k{1};
    double x{0.0};
    double h{0.0};        // h_k(x) = (p+x)/((k+x)(k+1+x))
    double h_prime{0.0};  // d/dx h_k(x)
    double d{0.0};        // D_k(x)
    double g_kx{0.0};     // G(k,x) = (p+x)(k+x)^3(k+1+x)^2 D_k'(x)
};

/// D_k(x) = ((p+1+x)(p+x)^2 + (k-p)^2(k+1-p)) / ((p+x)(k+x)^3(k+1+x)^2).
inline double d_k(std::uint64_t p, std::uint64_t k, double x) {
    const double a = static_cast<double>(p) + x;
    const double u = static_cast<double>(k) + x;
    const double m = static_cast<double>(k - p);
    const double num = (a + 1.0) * a * a + m * m * (m + 1.0);
    return num / (a * u * u * u * (u + 1.0) * (u + 1.0));
}

inline ProofDiagnostics diagnostics(std::uint64_t p, std::uint64_t k, double x) {
    detail::require(p >= 1, "diagnostics: p must be >= 1");
    detail::require(k >= p, "diagnostics: k must be >= p");
    detail::require_unit(x, "diagnostics: x must be in [0,1]");
    const double a = static_cast<double>(p) + x;
    const double u = static_cast<double>(k) + x;
    const double m = static_cast<double>(k - p);

    ProofDiagnostics out;
    out.p = p;
    out.k = k;
    out.x = x;
    out.h = a / (u * (u + 1.0));
    out.h_prime = (u * (u + 1.0) - (2.0 * u + 1.0) * a) / (u * u * (u + 1.0) * (u + 1.0));
    out.d = d_k(p, k, x);
    const double head = a * a * (a + 1.0);
    out.g_kx = head * (2.0 / a + 1.0 / (a + 1.0)) -
               (head + m * m * (m + 1.0)) * (1.0 / a + 3.0 / u + 2.0 / (u + 1.0));
    return out;
}

namespace detail {

// Coefficients e_n (n = 0..n_max) with D_k(x) = sum_n e_n (k+x)^{-n}.
//
// With A = p+x and u = k+x the numerator is the cubic
//   u^3 + (1-3A) u^2 + (3A^2-2A) u + 2A^2,
// so D_k = A^{-1} (u^-2 + (1-3A)u^-3 + (3A^2-2A)u^-4 + 2A^2 u^-5) (1+1/u)^{-2},
// and (1+1/u)^{-2} = sum_j (-1)^j (j+1) u^{-j}. The leading term is
// e_2 = 1/(p+x), so D_k ~ 1/((p+x) k^2).
inline std::vector<double> d_k_expansion(double a, int n_max) {
    const double pi[4] = {1.0, 1.0 - 3.0 * a, 3.0 * a * a - 2.0 * a, 2.0 * a * a};
    std::vector<double> e(n_max + 1, 0.0);
    for (int n = 2; n <= n_max; ++n) {
        double acc = 0.0;
        for (int i = 2; i <= 5 && i <= n; ++i) {
            const int j = n - i;
            acc += pi[i - 2] * ((j % 2 == 0) ? 1.0 : -1.0) * (j + 1);
        }
        e[n] = acc / a;
    }
    return e;
}

// Remainder of the D_k tail after the u^{-6} term, for u >= q.
inline double d_k_tail_bound(double a, double q) {
    const double s = (1.0 + std::abs(1.0 - 3.0 * a) + std::abs(3.0 * a * a - 2.0 * a) +
                      2.0 * a * a) / a;
    // |e_n| <= n s and zeta(n, q) <= 2 q^{1-n}; sum_{n>=7} n r^{n-1} in closed form.
    const double r = 1.0 / q;
    const double r6 = int_pow(r, 6);
    const double series = (7.0 * r6 * (1.0 - r) + r6 * r) / ((1.0 - r) * (1.0 - r));
    return 2.0 * s * series;
}

}  // namespace detail

/// Q(x) = p sum_{k>=p} D_k(x), with the tail past k_max closed through the
/// expansion of D_k in powers of 1/(k+x) up to (k+x)^{-6}.
inline double q_of_x(std::uint64_t p, double x, const TruncationPolicy& policy = {}) {
    policy.validate(p);
    detail::require_unit(x, "q_of_x: x must be in [0,1]");
    const double pd = static_cast<double>(p);
    const double a = pd + x;
    const auto [k_max, bound] = detail::resolve_cutoff(
        p, policy,
        [&](std::uint64_t k) {
            return pd * detail::d_k_tail_bound(a, static_cast<double>(k) + 1.0);
        },
        "q_of_x");
    (void)bound;

    CompensatedSum<double> acc;
    for (std::uint64_t k = k_max; k >= p; --k) acc += d_k(p, k, x);

    const auto e = detail::d_k_expansion(a, 6);
    const double q = static_cast<double>(k_max) + 1.0 + x;
    for (int n = 2; n <= 6; ++n) {
        const double floor = 8.0 * kEps * zeta_upper_bound(n, q);
        const double need = 0.01 * policy.tail_tol / (5.0 * pd * std::max(1.0, std::abs(e[n])));
        acc += e[n] * hurwitz_zeta_shifted(n, q, std::max(need, floor)).value;
    }
    return pd * acc.value();
}

}  // namespace gkl
