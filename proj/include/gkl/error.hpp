// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gkl {

/// A requested accuracy cannot be reached; carries the best achieved bound.
class UnachievablePrecision : public std::runtime_error {
public:
    UnachievablePrecision(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_{achieved} {}

    [[nodiscard]] double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// A non-finite value appeared where a finite one is required.
class NonFiniteValue : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

inline void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

inline void require_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error(what);
}

}  // namespace detail
}  // namespace gkl
