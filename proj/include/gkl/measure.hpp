// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

#include "gkl/error.hpp"

namespace gkl {

/// The parameter p of the map x -> {p/x}.
struct MapParams {
    std::uint64_t p{1};

    explicit MapParams(std::uint64_t p_) : p{p_} {
        detail::require(p >= 1 && p <= (std::uint64_t{1} << 53),
                        "MapParams: p must be in [1, 2^53]");
    }
    [[nodiscard]] double as_real() const { return static_cast<double>(p); }
};

/// The absolutely continuous invariant measure, density c/(p+x) on [0,1].
class InvariantMeasure {
public:
    explicit InvariantMeasure(MapParams params)
        : p_{params.as_real()}, norm_const_{1.0 / std::log1p(1.0 / p_)} {}

    /// c = 1/(ln(p+1) - ln p).
    [[nodiscard]] double norm_const() const { return norm_const_; }
    [[nodiscard]] double p() const { return p_; }

    [[nodiscard]] double density(double x) const {
        detail::require_unit(x, "density_eta: x must be in [0,1]");
        return norm_const_ / (p_ + x);
    }

    // ln(1 + x/p)/ln(1 + 1/p); log1p keeps full accuracy for large p.
    [[nodiscard]] double cdf(double x) const {
        detail::require_unit(x, "cdf_phi: x must be in [0,1]");
        return std::log1p(x / p_) * norm_const_;
    }

    [[nodiscard]] double interval(double lo, double hi) const {
        detail::require_unit(lo, "mu_interval: lo must be in [0,1]");
        detail::require_unit(hi, "mu_interval: hi must be in [0,1]");
        detail::require(lo <= hi, "mu_interval: lo > hi");
        return cdf(hi) - cdf(lo);
    }

private:
    double p_;
    double norm_const_;
};

/// eta_p(x) = c/(p+x).
inline double density_eta(std::uint64_t p, double x) {
    return InvariantMeasure{MapParams{p}}.density(x);
}

/// Phi_p(x) = mu_p([0, x]).
inline double cdf_phi(std::uint64_t p, double x) {
    return InvariantMeasure{MapParams{p}}.cdf(x);
}

inline double mu_interval(std::uint64_t p, double lo, double hi) {
    return InvariantMeasure{MapParams{p}}.interval(lo, hi);
}

}  // namespace gkl
