// SPDX-License-Identifier: Apache-2.0
#pragma once

// Smooth functions on [0,1] stored by their values at the N+1 Chebyshev
// extremal points x_j = sin^2(j pi / 2N), j = 0..N (so x_0 = 0, x_N = 1).
//
// Point evaluation uses the second barycentric form. Calculus goes through
// the Chebyshev coefficients in t = 2x - 1, computed once at construction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gkl/error.hpp"

namespace gkl {

inline constexpr int kDefaultDegree = 64;

/// Oversampling factor of the dense grid used by FuncRep::sup_norm.
inline constexpr int kSupRefinement = 8;

namespace detail {

/// Nodes, barycentric weights and the cosine table for one degree N.
struct ChebGrid {
    int degree;
    std::vector<double> nodes;
    std::vector<double> bary;
    // cos_table[m] = cos(m pi / N), m = 0..2N-1
    std::vector<double> cos_table;

    explicit ChebGrid(int n) : degree{n}, nodes(n + 1), bary(n + 1), cos_table(2 * n) {
        const double h = std::numbers::pi / (2.0 * n);
        for (int j = 0; j <= n; ++j) {
            const double s = std::sin(j * h);
            nodes[j] = s * s;
            bary[j] = (j % 2 == 0) ? 1.0 : -1.0;
        }
        nodes[0] = 0.0;
        nodes[n] = 1.0;
        bary[0] *= 0.5;
        bary[n] *= 0.5;
        for (int m = 0; m < 2 * n; ++m) {
            cos_table[m] = std::cos(m * std::numbers::pi / n);
        }
    }

    // T_k(t_j) with t_j = 2 x_j - 1 = -cos(j pi / N).
    [[nodiscard]] double cheb_at_node(int k, int j) const {
        const double c = cos_table[static_cast<std::size_t>(k) * j % (2 * degree)];
        return (k % 2 == 0) ? c : -c;
    }
};

inline std::shared_ptr<const ChebGrid> cheb_grid(int n) {
    static std::mutex mtx;
    static std::map<int, std::shared_ptr<const ChebGrid>> cache;
    std::lock_guard lock{mtx};
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const ChebGrid>(n);
    return slot;
}

// Coefficients of d/dx of sum c_k T_k(2x-1); same length as the input.
inline std::vector<double> cheb_derivative(std::span<const double> c) {
    const std::size_t len = c.size();
    std::vector<double> d(len, 0.0);
    if (len < 2) return d;
    const std::size_t n = len - 1;
    d[n - 1] = 2.0 * n * c[n];
    for (std::size_t k = n - 1; k >= 2; --k) {
        d[k - 1] = d[k + 1] + 2.0 * k * c[k];
    }
    d[0] = 0.5 * (n >= 2 ? d[2] : 0.0) + c[1];
    for (auto& v : d) v *= 2.0;  // dt/dx
    return d;
}

// Clenshaw summation of sum c_k T_k(t).
inline double cheb_eval(std::span<const double> c, double t) {
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double b0 = 2.0 * t * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return (c.empty() ? 0.0 : c[0]) + t * b1 - b2;
}

}  // namespace detail

/// A function on [0,1] sampled at Chebyshev extremal points. Immutable.
class FuncRep {
public:
    /// Takes ownership of samples at the N+1 nodes of degree N = size - 1.
    explicit FuncRep(std::vector<double> values) : values_{std::move(values)} {
        if (values_.size() < 3) throw std::invalid_argument("FuncRep: degree must be >= 2");
        for (const double v : values_) {
            if (!std::isfinite(v)) throw NonFiniteValue("FuncRep: non-finite sample");
        }
        grid_ = detail::cheb_grid(static_cast<int>(values_.size()) - 1);
        compute_coefficients();
    }

    template <typename F>
    static FuncRep from_callable(F&& f, int degree = kDefaultDegree) {
        if (degree < 2) throw std::invalid_argument("from_callable: degree must be >= 2");
        const auto grid = detail::cheb_grid(degree);
        std::vector<double> vals(grid->nodes.size());
        for (std::size_t j = 0; j < vals.size(); ++j) vals[j] = f(grid->nodes[j]);
        return FuncRep{std::move(vals)};
    }

    /// Representation with the given Chebyshev coefficients.
    static FuncRep from_coefficients(std::span<const double> c) {
        if (c.size() < 3) throw std::invalid_argument("from_coefficients: degree must be >= 2");
        const int n = static_cast<int>(c.size()) - 1;
        const auto grid = detail::cheb_grid(n);
        std::vector<double> vals(c.size(), 0.0);
        for (int j = 0; j <= n; ++j) {
            double acc = 0.0;
            for (int k = 0; k <= n; ++k) acc += c[k] * grid->cheb_at_node(k, j);
            vals[j] = acc;
        }
        return FuncRep{std::move(vals)};
    }

    [[nodiscard]] int degree() const { return grid_->degree; }
    [[nodiscard]] std::span<const double> nodes() const { return grid_->nodes; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::span<const double> coefficients() const { return coeffs_; }

    /// Barycentric interpolant; reproduces stored values at nodes exactly.
    [[nodiscard]] double evaluate(double x) const {
        detail::require_unit(x, "evaluate: x must be in [0,1]");
        return eval_unchecked(x);
    }
    double operator()(double x) const { return evaluate(x); }

    /// Same as evaluate without the range check, for hot loops whose
    /// arguments are in [0,1] by construction.
    [[nodiscard]] double eval_unchecked(double x) const {
        const auto& xs = grid_->nodes;
        const auto& w = grid_->bary;
        double num = 0.0;
        double den = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double diff = x - xs[j];
            if (diff == 0.0) return values_[j];
            const double q = w[j] / diff;
            num += q * values_[j];
            den += q;
        }
        return num / den;
    }

    /// Integral over [0,1]; exact for polynomials of degree <= N.
    [[nodiscard]] double integral() const {
        // int_0^1 T_k(2x-1) dx = 1/(1-k^2) for even k, 0 for odd k.
        double acc = 0.0;
        for (std::size_t k = 0; k < coeffs_.size(); k += 2) {
            acc += coeffs_[k] / (1.0 - static_cast<double>(k * k));
        }
        return acc;
    }

    /// Spectral derivative on the same grid; exact for polynomials of degree <= N.
    [[nodiscard]] FuncRep differentiate() const {
        return from_coefficients(detail::cheb_derivative(coeffs_));
    }

    /// F(x) = int_0^x f, represented at degree N+1 so polynomials stay exact.
    [[nodiscard]] FuncRep antiderivative() const {
        const std::size_t n = coeffs_.size() - 1;
        std::vector<double> big(n + 2, 0.0);
        // int T_0 = T_1, int T_1 = T_2/4, int T_k = T_{k+1}/(2(k+1)) - T_{k-1}/(2(k-1)).
        for (std::size_t k = 0; k <= n; ++k) {
            const double c = 0.5 * coeffs_[k];  // dx = dt/2
            if (k == 0) {
                big[1] += c;
            } else if (k == 1) {
                big[2] += 0.25 * c;
            } else {
                big[k + 1] += c / (2.0 * (k + 1));
                big[k - 1] -= c / (2.0 * (k - 1));
            }
        }
        double at_zero = 0.0;
        for (std::size_t k = 0; k < big.size(); ++k) at_zero += (k % 2 == 0) ? big[k] : -big[k];
        big[0] -= at_zero;
        return from_coefficients(big);
    }

    /// max |f| over the nodes and a uniform grid of kSupRefinement*N+1 points.
    /// A lower estimate of the true supremum.
    [[nodiscard]] double sup_norm() const {
        double best = 0.0;
        for (const double v : values_) best = std::max(best, std::abs(v));
        const int m = kSupRefinement * degree();
        for (int i = 0; i <= m; ++i) {
            best = std::max(best, std::abs(eval_unchecked(static_cast<double>(i) / m)));
        }
        return best;
    }

    /// Number of leading Chebyshev coefficients above the rounding-noise level.
    [[nodiscard]] std::size_t resolved_length() const {
        double scale = 0.0;
        for (const double v : values_) scale = std::max(scale, std::abs(v));
        const double floor = 16.0 * std::numeric_limits<double>::epsilon() * scale;
        std::size_t len = coeffs_.size();
        while (len > 1 && std::abs(coeffs_[len - 1]) <= floor) --len;
        return len;
    }

    /// Taylor coefficients f^{(j)}(0)/j!, j = 0..order, from the resolved
    /// Chebyshev coefficients.
    [[nodiscard]] std::vector<double> taylor_at_zero(int order) const {
        std::vector<double> c(coeffs_.begin(), coeffs_.begin() + resolved_length());
        std::vector<double> out;
        double factorial = 1.0;
        for (int j = 0; j <= order; ++j) {
            if (j > 0) factorial *= j;
            out.push_back(detail::cheb_eval(c, -1.0) / factorial);
            if (c.size() >= 2) c = detail::cheb_derivative(c);
            else c.assign(1, 0.0);
        }
        return out;
    }

    /// Upper bound of sup |f^{(order)}| on [0,1]: sum of absolute Chebyshev
    /// coefficients of the resolved part, differentiated `order` times.
    [[nodiscard]] double derivative_sup_bound(int order) const {
        std::vector<double> c(coeffs_.begin(), coeffs_.begin() + resolved_length());
        for (int j = 0; j < order; ++j) {
            if (c.size() < 2) return 0.0;
            c = detail::cheb_derivative(c);
        }
        double acc = 0.0;
        for (const double v : c) acc += std::abs(v);
        return acc;
    }

private:
    void compute_coefficients() {
        const int n = grid_->degree;
        coeffs_.assign(n + 1, 0.0);
        for (int k = 0; k <= n; ++k) {
            double acc = 0.0;
            for (int j = 0; j <= n; ++j) {
                const double w = (j == 0 || j == n) ? 0.5 : 1.0;
                acc += w * values_[j] * grid_->cheb_at_node(k, j);
            }
            coeffs_[k] = acc * (2.0 / n);
        }
        coeffs_[0] *= 0.5;
        coeffs_[n] *= 0.5;
    }

    std::shared_ptr<const detail::ChebGrid> grid_;
    std::vector<double> values_;
    std::vector<double> coeffs_;
};

/// Samples f at the N+1 nodes.
template <typename F>
FuncRep from_callable(F&& f, int degree = kDefaultDegree) {
    return FuncRep::from_callable(std::forward<F>(f), degree);
}

inline double evaluate(const FuncRep& f, double x) { return f.evaluate(x); }
inline double integral(const FuncRep& f) { return f.integral(); }
inline FuncRep differentiate(const FuncRep& f) { return f.differentiate(); }
inline double sup_norm(const FuncRep& f) { return f.sup_norm(); }

/// Pointwise combination of two representations on the same grid.
template <typename Op>
FuncRep combine(const FuncRep& a, const FuncRep& b, Op op) {
    if (a.degree() != b.degree()) throw std::invalid_argument("combine: degree mismatch");
    std::vector<double> out(a.values().size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = op(a.values()[j], b.values()[j]);
    return FuncRep{std::move(out)};
}

}  // namespace gkl
