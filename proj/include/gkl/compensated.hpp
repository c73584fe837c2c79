// SPDX-License-Identifier: Apache-2.0
#pragma once
#ifdef __FAST_MATH__
#error "fast math enabled (-ffast-math); this would negate compensation"
#endif

#include <cmath>
#include <concepts>

namespace gkl {

/// Neumaier (improved Kahan-Babuska) running sum.
template <std::floating_point T>
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;
    constexpr explicit CompensatedSum(T init) : sum_{init} {}

    constexpr CompensatedSum& operator+=(T elem) {
        const T tmp = sum_ + elem;
        if (std::abs(sum_) >= std::abs(elem)) {
            carry_ += (sum_ - tmp) + elem;
        } else {
            carry_ += (elem - tmp) + sum_;
        }
        sum_ = tmp;
        return *this;
    }
    constexpr CompensatedSum& operator-=(T elem) { return *this += -elem; }

    [[nodiscard]] constexpr T value() const { return sum_ + carry_; }

private:
    T sum_{0};
    T carry_{0};
};

}  // namespace gkl
