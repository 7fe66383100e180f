#pragma once

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "garchboot/csv.hpp"
#include "garchboot/harness.hpp"

namespace garchboot {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,    // internal error
    kExitUsage = 2,      // usage or validation error
    kExitDataError = 3,  // malformed input data
};

namespace detail {

/// CLI flag values are collected as strings keyed by config-file key, so
/// the precedence chain defaults < file < flags uses one code path.
struct FlagOverrides {
    std::map<std::string, std::string> values;

    void add_option(CLI::App* cmd, const std::string& flag, const std::string& key,
                    const std::string& description) {
        cmd->add_option_function<std::string>(
            flag, [this, key](const std::string& v) { values[key] = v; }, description);
    }

    void apply_to(KeyValueConfig& kv) const {
        for (const auto& [key, value] : values) kv.set(key, value);
    }
};

inline void add_common_flags(CLI::App* cmd, FlagOverrides& flags) {
    flags.add_option(cmd, "--seed", "seed", "master seed (u64)");
    flags.add_option(cmd, "--threads", "threads", "worker threads");
    flags.add_option(cmd, "--out", "out", "output directory");
    flags.add_option(cmd, "--n", "n", "sample size");
    flags.add_option(cmd, "--R", "R", "Monte-Carlo replications");
    flags.add_option(cmd, "--B", "B", "bootstrap replicates");
    flags.add_option(cmd, "--N", "N", "long-simulation length for J");
    flags.add_option(cmd, "--burn-in", "burn_in", "simulation burn-in steps");
    flags.add_option(cmd, "--omega0", "omega0", "true omega");
    flags.add_option(cmd, "--alpha0", "alpha0", "true alpha coefficients (comma list)");
    flags.add_option(cmd, "--beta0", "beta0", "true beta coefficients (comma list)");
    flags.add_option(cmd, "--dist", "dist", "innovation law: gaussian or t<df>");
    flags.add_option(cmd, "--scheme", "scheme",
                     "weight scheme: multinomial, exp1, gamma_nn, all_ones");
    flags.add_option(cmd, "--methods", "methods", "methods (comma list of qmle,wb,rb,empirical)");
    flags.add_option(cmd, "--levels", "levels", "confidence levels (comma list)");
    flags.add_option(cmd, "--ci-method", "ci_method", "interval construction: percentile or basic");
    flags.add_option(cmd, "--kappa-mode", "kappa_mode", "kappa source: residuals or oracle");
    flags.add_option(cmd, "--n-values", "n_values", "sample sizes (comma list)");
    flags.add_option(cmd, "--dists", "dists", "innovation laws (comma list)");
    flags.add_option(cmd, "--omega-grid", "omega_grid", "contour omega grid min:max:count");
    flags.add_option(cmd, "--alpha-grid", "alpha_grid", "contour alpha grid min:max:count");
    flags.add_option(cmd, "--q", "q", "fitted ARCH order");
    flags.add_option(cmd, "--p", "p", "fitted GARCH order");
}

inline std::string output_path(const ExperimentConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

inline void print_fit_summary(std::ostream& os, const FitSummary& summary) {
    const auto names = summary.fit.theta_hat.parameter_names();
    const Eigen::VectorXd est = summary.fit.theta_hat.to_vector();
    os << "QMLE fit on n=" << summary.n << " observations\n";
    os << "  converged: " << (summary.fit.converged ? "yes" : "no")
       << "  iterations: " << summary.fit.iterations
       << "  boundary: " << (summary.fit.boundary_flag ? "yes" : "no") << '\n';
    os << "  negative quasi-loglik: " << format_double(summary.fit.neg_loglik) << '\n';
    os << "  kappa estimate: " << format_double(summary.kappa) << '\n';
    for (std::size_t i = 0; i < names.size(); ++i) {
        os << "  " << names[i] << " = " << format_double(est[static_cast<Eigen::Index>(i)]);
        if (!summary.std_errors.empty())
            os << "  (se " << format_double(summary.std_errors[i]) << ")";
        os << '\n';
    }
    if (!summary.se_note.empty()) os << "  note: " << summary.se_note << '\n';
}

}  // namespace detail

/**
 * garchboot <simulate|fit|contour|convergence|sae|coverage> [flags]
 *
 * Returns 0 on success, 2 on usage/validation errors, 3 on data errors.
 */
inline int run_cli(std::vector<std::string> args) {
    CLI::App app{"GARCH simulation, QMLE and bootstrap-inference toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "key=value configuration file")->expected(1);

    detail::FlagOverrides flags;
    std::string fit_input;

    CLI::App* cmd_simulate = app.add_subcommand("simulate", "simulate a path, write t,x,h CSV");
    CLI::App* cmd_fit = app.add_subcommand("fit", "fit a series from file ('-' for stdin)");
    cmd_fit->add_option("input", fit_input, "series file, one observation per line")->required();
    CLI::App* cmd_contour =
        app.add_subcommand("contour", "limiting-covariance elements over an ARCH(1) grid");
    CLI::App* cmd_convergence =
        app.add_subcommand("convergence", "n*cov / theory ratios against sample size");
    CLI::App* cmd_sae = app.add_subcommand("sae", "sum-of-absolute-errors per replication");
    CLI::App* cmd_coverage = app.add_subcommand("coverage", "interval and ellipse coverage table");
    for (CLI::App* cmd :
         {cmd_simulate, cmd_fit, cmd_contour, cmd_convergence, cmd_sae, cmd_coverage})
        detail::add_common_flags(cmd, flags);

    std::vector<const char*> argv;
    argv.push_back("garchboot");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    }

    try {
        ExperimentConfig cfg;
        KeyValueConfig kv;
        if (!config_path.empty()) kv = KeyValueConfig::from_file(config_path);
        flags.apply_to(kv);
        cfg.apply(kv);

        const auto t0 = std::chrono::steady_clock::now();
        const auto wall = [&] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };

        if (cmd_simulate->parsed()) {
            const auto rows = run_simulate(cfg);
            write_simulate_csv(detail::output_path(cfg, "simulate.csv"), rows);
            write_meta(detail::output_path(cfg, "simulate.meta.txt"), cfg, wall());
        } else if (cmd_fit->parsed()) {
            std::vector<double> series;
            if (fit_input == "-") {
                series = parse_series(std::cin, "<stdin>");
            } else {
                std::ifstream in(fit_input);
                if (!in) throw DataError("cannot open input file: " + fit_input);
                series = parse_series(in, fit_input);
            }
            const FitSummary summary = run_fit(cfg, series);
            write_fit_csv(detail::output_path(cfg, "fit.csv"), summary);
            write_meta(detail::output_path(cfg, "fit.meta.txt"), cfg, wall());
            detail::print_fit_summary(std::cout, summary);
        } else if (cmd_contour->parsed()) {
            const auto rows = run_contour(cfg);
            write_contour_csv(detail::output_path(cfg, "contour.csv"), rows);
            write_meta(detail::output_path(cfg, "contour.meta.txt"), cfg, wall());
        } else if (cmd_convergence->parsed()) {
            const auto rows = run_convergence(cfg);
            write_convergence_csv(detail::output_path(cfg, "convergence.csv"), rows);
            write_meta(detail::output_path(cfg, "convergence.meta.txt"), cfg, wall());
        } else if (cmd_sae->parsed()) {
            const auto rows = run_sae(cfg);
            write_sae_csv(detail::output_path(cfg, "sae.csv"), rows);
            write_meta(detail::output_path(cfg, "sae.meta.txt"), cfg, wall());
        } else if (cmd_coverage->parsed()) {
            const auto rows = run_coverage(cfg);
            write_coverage_csv(detail::output_path(cfg, "coverage.csv"), rows);
            write_meta(detail::output_path(cfg, "coverage.meta.txt"), cfg, wall());
        }
        return kExitOk;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace garchboot
