// SPDX-License-Identifier: Apache-2.0
#pragma once

// Number formatting and the small CSV/JSON emitters used
// by the command-line front end. Every double is written with 17 significant
// digits so that output round-trips and is byte-stable across runs.

#include <cstdio>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gkl::cli {

inline constexpr int kSchemaVersion = 1;

inline std::string fmt_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    // %#.17g keeps trailing zeros, so every value carries 17 significant digits.
    char buf[64];
    const int len = std::snprintf(buf, sizeof buf, "%#.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

inline std::string fmt_int(std::uint64_t v) { return std::to_string(v); }
inline std::string fmt_bool(bool b) { return b ? "true" : "false"; }

/// One CSV row; fields are joined with ',' and never quoted.
inline void csv_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) os << ',';
        os << fields[i];
    }
    os << '\n';
}

/// Minimal streaming JSON writer. Keys and strings are escaped; numbers go
/// through fmt_real (non-finite values become null).
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& os) : os_{os} {}

    JsonWriter& begin_object() { return open('{'); }
    JsonWriter& end_object() { return close('}'); }
    JsonWriter& begin_array() { return open('['); }
    JsonWriter& end_array() { return close(']'); }

    JsonWriter& key(std::string_view k) {
        separator();
        write_string(k);
        os_ << ':';
        after_key_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        separator();
        os_ << (std::isfinite(v) ? fmt_real(v) : std::string("null"));
        return *this;
    }
    JsonWriter& value(std::uint64_t v) {
        separator();
        os_ << v;
        return *this;
    }
    JsonWriter& value(int v) {
        separator();
        os_ << v;
        return *this;
    }
    JsonWriter& value(bool v) {
        separator();
        os_ << fmt_bool(v);
        return *this;
    }
    JsonWriter& value(std::string_view s) {
        separator();
        write_string(s);
        return *this;
    }
    JsonWriter& value(const char* s) { return value(std::string_view{s}); }

    template <typename T>
    JsonWriter& field(std::string_view k, const T& v) {
        key(k);
        return value(v);
    }

private:
    JsonWriter& open(char c) {
        separator();
        os_ << c;
        first_.push_back(true);
        return *this;
    }
    JsonWriter& close(char c) {
        first_.pop_back();
        os_ << c;
        return *this;
    }
    void separator() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (!first_.empty()) {
            if (!first_.back()) os_ << ',';
            first_.back() = false;
        }
    }
    void write_string(std::string_view s) {
        os_ << '"';
        for (const char c : s) {
            switch (c) {
                case '"': os_ << "\\\""; break;
                case '\\': os_ << "\\\\"; break;
                case '\n': os_ << "\\n"; break;
                case '\t': os_ << "\\t"; break;
                default: os_ << c;
            }
        }
        os_ << '"';
    }

    std::ostream& os_;
    std::vector<bool> first_;
    bool after_key_{false};
};

}  // namespace gkl::cli
