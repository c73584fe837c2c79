// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cli/format.hpp"
#include "gkl/gkl.hpp"

namespace gkl::cli {

enum class OutputFormat { csv, json };

/// Parsed command line. Defaults match the library defaults.
struct RunConfig {
    std::string command;
    std::uint64_t p{1};
    std::optional<std::uint64_t> p_max;
    std::size_t n{1};
    std::size_t n_max{30};
    int grid{kDefaultGridSize};
    std::vector<double> x;
    std::uint64_t samples{1'000'000};
    std::uint64_t seed{20181231};
    std::optional<double> tol;
    double tail_tol{TruncationPolicy{}.tail_tol};
    std::uint64_t k_max{0};
    int taylor_order{TruncationPolicy{}.taylor_order};
    int degree{kDefaultDegree};
    std::string out;
    OutputFormat format{OutputFormat::csv};
    unsigned workers{1};

    [[nodiscard]] TruncationPolicy policy() const {
        TruncationPolicy pol;
        pol.k_max = k_max;
        pol.taylor_order = taylor_order;
        pol.tail_tol = tail_tol;
        return pol;
    }
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitError = 2;

namespace detail {

// Runs job(i) for i in [0, count) on `workers` threads, round-robin.
template <typename Job>
void parallel_for(std::size_t count, unsigned workers, Job&& job) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex mtx;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) job(i);
            } catch (...) {
                std::lock_guard lock{mtx};
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// rate

struct RateRow {
    std::uint64_t p{1};
    BoundedValue q;
    QpBounds bounds;
    double residual{std::numeric_limits<double>::quiet_NaN()};
    bool pass{false};
};

inline RateRow rate_row(std::uint64_t p, double tol) {
    RateRow row;
    row.p = p;
    row.q = q_constant(p, std::max(tol, attainable_q_tol(p)));
    row.bounds = q_bounds(p);
    if (p >= 2) row.residual = asymptotic_residual(p);
    row.pass = row.bounds.lower < row.q.lo() && row.q.hi() < row.bounds.upper &&
               row.bounds.upper < 1.0;
    return row;
}

/// Q_p with its bounds for p in [p, p_max]. Exit 1 if any row fails.
inline int cmd_rate(const RunConfig& cfg, std::ostream& os) {
    const std::uint64_t lo = cfg.p;
    const std::uint64_t hi = cfg.p_max.value_or(cfg.p);
    if (hi < lo) throw std::invalid_argument("rate: --p-max must be >= --p");
    const double tol = cfg.tol.value_or(1.0e-12);

    std::vector<RateRow> rows(hi - lo + 1);
    detail::parallel_for(rows.size(), cfg.workers,
                         [&](std::size_t i) { rows[i] = rate_row(lo + i, tol); });
    const bool all = std::all_of(rows.begin(), rows.end(), [](const RateRow& r) { return r.pass; });

    if (cfg.format == OutputFormat::csv) {
        csv_row(os, {"p", "q_p", "q_err", "lower", "upper", "pass", "asymptotic_residual"});
        for (const auto& r : rows) {
            csv_row(os, {fmt_int(r.p), fmt_real(r.q.value), fmt_real(r.q.err),
                         fmt_real(r.bounds.lower), fmt_real(r.bounds.upper), fmt_bool(r.pass),
                         r.p >= 2 ? fmt_real(r.residual) : std::string{}});
        }
    } else {
        JsonWriter js{os};
        js.begin_object().field("schema_version", kSchemaVersion).field("command", "rate");
        js.key("rows").begin_array();
        for (const auto& r : rows) {
            js.begin_object()
                .field("p", r.p)
                .field("q_p", r.q.value)
                .field("q_err", r.q.err)
                .field("lower", r.bounds.lower)
                .field("upper", r.bounds.upper)
                .field("zeta2_lower", r.bounds.zeta2_lower)
                .field("zeta3_upper", r.bounds.zeta3_upper)
                .field("pass", r.pass);
            if (r.p >= 2) js.field("asymptotic_residual", r.residual);
            js.end_object();
        }
        js.end_array().field("all_pass", all).end_object();
        os << '\n';
    }
    return all ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// iterate

inline void write_rate_report(JsonWriter& js, const RateReport& rep) {
    js.begin_object()
        .field("schema_version", kSchemaVersion)
        .field("p", rep.p)
        .field("q_p", rep.q_p)
        .field("q_err", rep.q_err)
        .field("q_lower", rep.q_lower)
        .field("q_upper", rep.q_upper)
        .field("fitted_rate", rep.fitted_rate);
    js.key("fit_window")
        .begin_array()
        .value(static_cast<std::uint64_t>(rep.fit_window.first))
        .value(static_cast<std::uint64_t>(rep.fit_window.second))
        .end_array();
    js.field("residual_floor", rep.residual_floor).field("usable", rep.usable);
    if (!rep.note.empty()) js.field("note", rep.note);
    js.end_object();
}

/// phi_{p,n} and Delta_{p,n} for n = 0..n_max, followed by the rate report.
inline int cmd_iterate(const RunConfig& cfg, std::ostream& os) {
    const std::vector<double> grid = uniform_grid(cfg.grid);
    const auto seq = phi_sequence(cfg.p, cfg.n_max, grid, cfg.policy(), cfg.degree);
    std::vector<double> sups;
    for (const auto& rec : seq) sups.push_back(rec.sup_delta);
    const RateReport rep = fit_rate_from(cfg.p, sups);

    if (cfg.format == OutputFormat::csv) {
        std::vector<std::string> header{"n", "sup_delta"};
        for (const double x : grid) header.push_back("phi@" + fmt_real(x));
        for (const double x : grid) header.push_back("delta@" + fmt_real(x));
        csv_row(os, header);
        for (const auto& rec : seq) {
            std::vector<std::string> row{fmt_int(rec.n), fmt_real(rec.sup_delta)};
            for (const double v : rec.phi) row.push_back(fmt_real(v));
            for (const double v : rec.delta) row.push_back(fmt_real(v));
            csv_row(os, row);
        }
        os << "# rate_report ";
        JsonWriter js{os};
        write_rate_report(js, rep);
        os << '\n';
    } else {
        JsonWriter js{os};
        js.begin_object()
            .field("schema_version", kSchemaVersion)
            .field("command", "iterate")
            .field("p", cfg.p);
        js.key("grid").begin_array();
        for (const double x : grid) js.value(x);
        js.end_array();
        js.key("rows").begin_array();
        for (const auto& rec : seq) {
            js.begin_object()
                .field("n", static_cast<std::uint64_t>(rec.n))
                .field("sup_delta", rec.sup_delta);
            js.key("phi").begin_array();
            for (const double v : rec.phi) js.value(v);
            js.end_array().key("delta").begin_array();
            for (const double v : rec.delta) js.value(v);
            js.end_array().end_object();
        }
        js.end_array();
        js.key("rate_report");
        write_rate_report(js, rep);
        js.end_object();
        os << '\n';
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// montecarlo

struct MonteCarloRow {
    double x{0.0};
    double estimate{0.0};
    double analytic{0.0};
    double abs_diff{0.0};
    double tolerance{0.0};
    bool pass{false};
};

inline std::vector<MonteCarloRow> montecarlo_rows(const RunConfig& cfg) {
    const std::vector<double> xs = cfg.x.empty() ? std::vector<double>{0.25, 0.5, 0.75} : cfg.x;
    const double tol = 4.0 / std::sqrt(static_cast<double>(cfg.samples));
    std::vector<MonteCarloRow> rows;
    for (const double x : xs) {
        MonteCarloRow r;
        r.x = x;
        r.estimate = phi_monte_carlo(cfg.p, cfg.n, x, cfg.samples, cfg.seed, cfg.workers);
        r.analytic = phi_iterate(cfg.p, cfg.n, {x}, cfg.policy(), cfg.degree).phi[0];
        r.abs_diff = std::abs(r.estimate - r.analytic);
        r.tolerance = tol;
        r.pass = r.abs_diff <= tol;
        rows.push_back(r);
    }
    return rows;
}

/// Monte Carlo estimate of phi_{p,n}(x) against the density path.
inline int cmd_montecarlo(const RunConfig& cfg, std::ostream& os) {
    const auto rows = montecarlo_rows(cfg);
    const bool all = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
    if (cfg.format == OutputFormat::csv) {
        csv_row(os, {"x", "estimate", "analytic", "abs_diff", "tolerance", "pass"});
        for (const auto& r : rows) {
            csv_row(os, {fmt_real(r.x), fmt_real(r.estimate), fmt_real(r.analytic),
                         fmt_real(r.abs_diff), fmt_real(r.tolerance), fmt_bool(r.pass)});
        }
    } else {
        JsonWriter js{os};
        js.begin_object()
            .field("schema_version", kSchemaVersion)
            .field("command", "montecarlo")
            .field("p", cfg.p)
            .field("n", static_cast<std::uint64_t>(cfg.n))
            .field("samples", cfg.samples)
            .field("seed", cfg.seed)
            .field("workers", static_cast<std::uint64_t>(cfg.workers));
        js.key("rows").begin_array();
        for (const auto& r : rows) {
            js.begin_object()
                .field("x", r.x)
                .field("estimate", r.estimate)
                .field("analytic", r.analytic)
                .field("abs_diff", r.abs_diff)
                .field("tolerance", r.tolerance)
                .field("pass", r.pass)
                .end_object();
        }
        js.end_array().field("all_pass", all).end_object();
        os << '\n';
    }
    return all ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// orbit

/// The orbit of x0 = first --x value; the final point carries no digit.
inline int cmd_orbit(const RunConfig& cfg, std::ostream& os) {
    if (cfg.x.empty()) throw std::invalid_argument("orbit: --x is required");
    const OrbitRecord rec = orbit(cfg.p, cfg.x.front(), cfg.n);
    if (cfg.format == OutputFormat::csv) {
        csv_row(os, {"i", "point", "digit"});
        for (std::size_t i = 0; i < rec.points.size(); ++i) {
            csv_row(os, {fmt_int(i), fmt_real(rec.points[i]),
                         i < rec.digits.size() ? fmt_int(rec.digits[i]) : std::string{}});
        }
    } else {
        JsonWriter js{os};
        js.begin_object()
            .field("schema_version", kSchemaVersion)
            .field("command", "orbit")
            .field("p", rec.p)
            .field("x0", rec.x0);
        js.key("points").begin_array();
        for (const double v : rec.points) js.value(v);
        js.end_array().key("digits").begin_array();
        for (const auto d : rec.digits) js.value(d);
        js.end_array().end_object();
        os << '\n';
    }
    return kExitOk;
}

}  // namespace gkl::cli
