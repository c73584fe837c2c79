// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/verify.hpp"

namespace gkl::cli {

namespace detail {

inline void add_output_flags(CLI::App& sub, RunConfig& cfg) {
    static const std::map<std::string, OutputFormat> kFormats{{"csv", OutputFormat::csv},
                                                             {"json", OutputFormat::json}};
    sub.add_option("--out", cfg.out, "Write output to this file instead of stdout");
    sub.add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
}

inline void add_policy_flags(CLI::App& sub, RunConfig& cfg) {
    sub.add_option("--tail-tol", cfg.tail_tol, "Certified bound on the branch-sum tail")
        ->check(CLI::PositiveNumber);
    sub.add_option("--k-max", cfg.k_max, "Last explicit branch (0 = automatic)");
    sub.add_option("--taylor-order", cfg.taylor_order, "Tail closure order")
        ->check(CLI::Range(0, 4));
    sub.add_option("--degree", cfg.degree, "Spectral degree N")->check(CLI::Range(2, 4096));
}

}  // namespace detail

/// Parses argv-style arguments (without the program name), runs the chosen
/// command and returns the process exit status: 0 success, 1 a declared
/// check failed, 2 usage or runtime error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Generalized Gauss map laboratory: invariant measure, transfer operator, "
                 "Gauss-Kuzmin convergence and the rate constant Q_p"};
    app.name("gkl");
    app.require_subcommand(1);

    auto* rate = app.add_subcommand("rate", "Q_p, its error and closed-form bounds over a p range");
    rate->add_option("--p", cfg.p, "First p")->check(CLI::Range(std::uint64_t{1}, kMaxP));
    rate->add_option("--p-max", cfg.p_max, "Last p (default: --p)")
        ->check(CLI::Range(std::uint64_t{1}, kMaxP));
    rate->add_option("--tol", cfg.tol, "Requested error on Q_p")->check(CLI::PositiveNumber);
    rate->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::Range(1u, 256u));
    detail::add_output_flags(*rate, cfg);

    auto* iterate = app.add_subcommand("iterate", "phi_{p,n} and Delta_{p,n} for n = 0..n_max");
    iterate->add_option("--p", cfg.p)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 20));
    iterate->add_option("--n-max", cfg.n_max)->check(CLI::Range(std::size_t{0}, std::size_t{500}));
    iterate->add_option("--grid", cfg.grid, "Number of equispaced grid points")
        ->check(CLI::Range(2, 100000));
    detail::add_policy_flags(*iterate, cfg);
    detail::add_output_flags(*iterate, cfg);

    auto* mc = app.add_subcommand("montecarlo", "Monte Carlo phi_{p,n}(x) against the iterate");
    mc->add_option("--p", cfg.p)->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1} << 20));
    mc->add_option("--n", cfg.n)->check(CLI::Range(std::size_t{0}, std::size_t{500}));
    mc->add_option("--x", cfg.x, "Evaluation points (comma separated)")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
    mc->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
    mc->add_option("--seed", cfg.seed);
    mc->add_option("--workers", cfg.workers)->check(CLI::Range(1u, 256u));
    detail::add_policy_flags(*mc, cfg);
    detail::add_output_flags(*mc, cfg);

    auto* orb = app.add_subcommand("orbit", "Orbit points and digits of T_p");
    orb->add_option("--p", cfg.p)->check(CLI::Range(std::uint64_t{1}, kMaxP));
    orb->add_option("--x", cfg.x, "Starting point x0")->required()->check(CLI::Range(0.0, 1.0));
    orb->add_option("--n", cfg.n)->check(CLI::Range(std::size_t{0}, std::size_t{100'000'000}));
    detail::add_output_flags(*orb, cfg);

    auto* verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--tol", cfg.tol, "Override the threshold of tolerance-type checks")
        ->check(CLI::NonNegativeNumber);
    verify->add_option("--samples", cfg.samples)->check(CLI::PositiveNumber);
    verify->add_option("--seed", cfg.seed);
    verify->add_option("--workers", cfg.workers)->check(CLI::Range(1u, 256u));
    verify->add_option("--tail-tol", cfg.tail_tol)->check(CLI::PositiveNumber);
    detail::add_output_flags(*verify, cfg);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "gkl: " << e.what() << '\n';
        return kExitError;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    std::ostringstream buffer;
    int status = kExitOk;
    try {
        if (cfg.command == "rate") status = cmd_rate(cfg, buffer);
        else if (cfg.command == "iterate") status = cmd_iterate(cfg, buffer);
        else if (cfg.command == "montecarlo") status = cmd_montecarlo(cfg, buffer);
        else if (cfg.command == "orbit") status = cmd_orbit(cfg, buffer);
        else status = cmd_verify(cfg, buffer);
    } catch (const std::exception& e) {
        err << "gkl " << cfg.command << ": " << e.what() << '\n';
        return kExitError;
    }

    if (cfg.out.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file{cfg.out, std::ios::binary};
        if (!file) {
            err << "gkl: cannot open " << cfg.out << '\n';
            return kExitError;
        }
        file << buffer.str();
    }
    return status;
}

}  // namespace gkl::cli
