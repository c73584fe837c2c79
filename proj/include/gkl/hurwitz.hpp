// SPDX-License-Identifier: Apache-2.0
#pragma once

// Hurwitz zeta values at small integer s with certified absolute error,
// the Gauss-Kuzmin rate constant Q_p = 2p^2 zeta(3,p) - p zeta(2,p),
// and its closed-form two-sided bounds.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "gkl/compensated.hpp"
#include "gkl/error.hpp"

namespace gkl {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// A value together with a radius r such that |value - exact| <= r.
struct BoundedValue {
    double value{0.0};
    double err{0.0};

    [[nodiscard]] double lo() const { return value - err; }
    [[nodiscard]] double hi() const { return value + err; }
};

/// Two-sided closed-form bounds on Q_p and the auxiliary constants used
/// to derive them.
struct QpBounds {
    std::uint64_t p{1};
    double lower{0.0};        // 1/p - 1/(2p+1)
    double upper{0.0};        // 1/(2p) + 3/(8p^2)
    double zeta2_lower{0.0};  // 1/(p+a) <= zeta(2,p)
    double zeta3_upper{0.0};  // zeta(3,p) < 1/(2(p^2-p+b))
    double a{0.0};            // root of a^2 + (2p+1)a + p = 0 in (-1/2, 0)
    double b{0.0};            // root of b^2 + 2p^2 b - p^2 = 0 in (0, 1/2)
};

/// Largest p accepted by the closed-form routines (exactly representable).
inline constexpr std::uint64_t kMaxP = std::uint64_t{1} << 53;

namespace detail {

inline constexpr double kMaxCutoff = 1.0e9;

inline double inv_pow(double k, int s) {
    double r = 1.0;
    for (int i = 0; i < s; ++i) r *= k;
    return 1.0 / r;
}

// Euler-Maclaurin tail sum_{k>=0} (m+k)^{-s} truncated after the B2 term.
inline double em_tail(int s, double m) {
    const double ms = inv_pow(m, s);
    return m * ms / (s - 1) + 0.5 * ms + s * ms / (12.0 * m);
}

// Magnitude of the B4 term, the first one omitted from em_tail.
inline double em_first_omitted(int s, double m) {
    return s * (s + 1.0) * (s + 2.0) / 720.0 * inv_pow(m, s + 3);
}

inline BoundedValue zeta_from(int s, double q, double tol) {
    if (s < 2 || s > 6) {
        throw std::invalid_argument("hurwitz_zeta: s must be in {2,...,6}");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("hurwitz_zeta: tol must be positive");
    if (!(q >= 1.0) || !std::isfinite(q)) {
        throw std::invalid_argument("hurwitz_zeta: shift must be finite and >= 1");
    }

    // The direct part covers q, q+1, ..., cutoff-1; the tail starts at cutoff.
    double cutoff = q;
    CompensatedSum<double> direct;
    auto advance_to = [&](double target) {
        while (cutoff < target) {
            direct += inv_pow(cutoff, s);
            cutoff += 1.0;
        }
    };
    advance_to(std::max(q, 64.0));

    // First pass estimate of the magnitude for the ulp-floor check.
    const double magnitude = direct.value() + em_tail(s, cutoff);
    if (tol < 4.0 * kEps * magnitude) {
        throw UnachievablePrecision(
            "hurwitz_zeta: tolerance below 4 ulps of the result",
            4.0 * kEps * magnitude);
    }
    const double rounding = 2.0 * kEps * magnitude;

    while (em_first_omitted(s, cutoff) + rounding > tol) {
        const double target = 2.0 * cutoff;
        if (target > kMaxCutoff) {
            throw UnachievablePrecision("hurwitz_zeta: cutoff limit reached",
                                        em_first_omitted(s, cutoff) + rounding);
        }
        advance_to(target);
    }

    CompensatedSum<double> total = direct;
    total += em_tail(s, cutoff);
    return {total.value(), em_first_omitted(s, cutoff) + rounding};
}

}  // namespace detail

/// zeta(s, p) = sum_{k>=p} k^{-s} for s in {2,...,6}, integer p >= 1.
///
/// The first terms are summed directly in compensated arithmetic; the
/// remainder from the cutoff N = max(p, 64) on uses the Euler-Maclaurin
/// formula through the B2 correction. N is doubled until the first omitted
/// (B4) term plus a rounding allowance fits inside tol. For these completely
/// monotone summands the Euler-Maclaurin remainders alternate in sign, so the
/// first omitted term bounds the truncation error.
///
/// Throws UnachievablePrecision when tol is below 4 ulps of the result.
inline BoundedValue hurwitz_zeta(int s, std::uint64_t p, double tol) {
    if (p < 1) throw std::invalid_argument("hurwitz_zeta: p must be >= 1");
    if (p > kMaxP) throw std::invalid_argument("hurwitz_zeta: p too large");
    return detail::zeta_from(s, static_cast<double>(p), tol);
}

/// zeta(s, q) for a real shift q >= 1; same method as hurwitz_zeta.
inline BoundedValue hurwitz_zeta_shifted(int s, double q, double tol) {
    return detail::zeta_from(s, q, tol);
}

/// Upper bound sum_{k>=0} (q+k)^{-s} <= q^{-s} + q^{1-s}/(s-1), any s >= 2.
inline double zeta_upper_bound(int s, double q) {
    const double qs = detail::inv_pow(q, s);
    return qs + q * qs / (s - 1);
}

/// psi(q + x) - psi(q) = sum_{k>=0} (1/(q+k) - 1/(q+k+x)) for q >= 1, x in [0,1].
inline BoundedValue digamma_difference(double q, double x) {
    detail::require(q >= 1.0, "digamma_difference: q must be >= 1");
    detail::require(x >= 0.0 && x <= 1.0, "digamma_difference: x must be in [0,1]");
    CompensatedSum<double> sum;
    double z = q;
    for (; z < 64.0; z += 1.0) {
        sum += x / (z * (z + x));
    }
    // Asymptotic psi(z) ~ ln z - 1/(2z) - sum B_{2j}/(2j z^{2j}).
    auto series = [](double w) {
        const double w2 = 1.0 / (w * w);
        return -0.5 / w -
               w2 * (1.0 / 12 - w2 * (1.0 / 120 - w2 * (1.0 / 252 - w2 * (1.0 / 240))));
    };
    sum += std::log1p(x / z);
    sum += series(z + x) - series(z);
    const double omitted = 1.0 / (132.0 * std::pow(z, 10));
    const double v = sum.value();
    return {v, omitted + 4.0 * kEps * std::abs(v)};
}

/// Q_p = 2p^2 zeta(3,p) - p zeta(2,p); component zetas computed at tol/(4p^2).
inline BoundedValue q_constant(std::uint64_t p, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("q_constant: tol must be positive");
    if (p < 1) throw std::invalid_argument("q_constant: p must be >= 1");
    const double pd = static_cast<double>(p);
    const double sub_tol = tol / (4.0 * pd * pd);
    const BoundedValue z3 = hurwitz_zeta(3, p, sub_tol);
    const BoundedValue z2 = hurwitz_zeta(2, p, sub_tol);

    const double t3 = 2.0 * pd * pd * z3.value;
    const double t2 = pd * z2.value;
    const double value = t3 - t2;
    const double err = 2.0 * pd * pd * z3.err + pd * z2.err + 2.0 * kEps * (t3 + t2);
    if (err > tol) {
        throw UnachievablePrecision("q_constant: propagated error exceeds tol", err);
    }
    return {value, err};
}

/// Smallest practical tol for q_constant(p, .): the component zetas must
/// stay above their 4-ulp floor after the 1/(4p^2) split.
inline double attainable_q_tol(std::uint64_t p) {
    return 64.0 * kEps * (static_cast<double>(p) + 1.0);
}

/// The closed-form bounds on Q_p and on zeta(2,p), zeta(3,p).
inline QpBounds q_bounds(std::uint64_t p) {
    if (p < 1) throw std::invalid_argument("q_bounds: p must be >= 1");
    if (p > kMaxP) throw std::invalid_argument("q_bounds: p exceeds 2^53");
    const double pd = static_cast<double>(p);

    QpBounds out;
    out.p = p;
    out.lower = 1.0 / pd - 1.0 / (2.0 * pd + 1.0);
    out.upper = 1.0 / (2.0 * pd) + 3.0 / (8.0 * pd * pd);

    // sqrt(4p^2+1) - 2p and sqrt(p^2+1) - p rewritten without cancellation.
    const double r4 = std::sqrt(std::fma(4.0 * pd, pd, 1.0));
    out.a = 0.5 * (1.0 / (r4 + 2.0 * pd) - 1.0);
    const double r1 = std::sqrt(std::fma(pd, pd, 1.0));
    out.b = pd / (r1 + pd);

    out.zeta2_lower = 1.0 / (pd + out.a);
    out.zeta3_upper = 1.0 / (2.0 * (pd * (pd - 1.0) + out.b));
    return out;
}

/// p^2 (Q_p - 1/(2p)) - 1/3, which vanishes like -2/(15p^2) as p grows.
///
/// Q_p = sum_{k>=p} g(k) with g(k) = p(2p-k)/k^3. Branches below
/// N = max(p, 64) are summed directly; the rest goes through Euler-Maclaurin
/// with g^{(m)}(k) = (-1)^m p (m+1)! ((m+2)p - k) / k^{m+3}, each term a single
/// product, so nothing of size 1 cancels before the p^2 scaling.
inline double asymptotic_residual(std::uint64_t p) {
    if (p < 2) throw std::invalid_argument("asymptotic_residual: p must be >= 2");
    if (p > kMaxP) throw std::invalid_argument("asymptotic_residual: p exceeds 2^53");
    const double pd = static_cast<double>(p);
    const std::uint64_t n = std::max<std::uint64_t>(p, 64);
    const double nd = static_cast<double>(n);

    // B_{2j}/(2j)! for j = 1..5
    static constexpr double kBern[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0,
                                       -1.0 / 1209600.0, 1.0 / 47900160.0};
    auto deriv = [&](int m) {
        double fact = 1.0;
        for (int i = 2; i <= m + 1; ++i) fact *= i;
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        return sign * pd * fact * ((m + 2.0) * pd - nd) / std::pow(nd, m + 3);
    };

    // Q_p - 1/(2p), accumulated without the leading 1/(2p).
    CompensatedSum<double> excess;
    if (n == p) {
        // g(p)/2 = 1/(2p) exactly and the integral from p vanishes.
    } else {
        for (std::uint64_t k = p; k < n; ++k) {
            const double kd = static_cast<double>(k);
            excess += pd * (2.0 * pd - kd) / (kd * kd * kd);
        }
        excess += pd * (pd - nd) / (nd * nd);  // int_N^inf g
        excess += 0.5 * pd * (2.0 * pd - nd) / (nd * nd * nd);
        excess -= 0.5 / pd;
    }
    for (int j = 1; j <= 5; ++j) excess -= kBern[j - 1] * deriv(2 * j - 1);
    return pd * pd * excess.value() - 1.0 / 3.0;
}

}  // namespace gkl
