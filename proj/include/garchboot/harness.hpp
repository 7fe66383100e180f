#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "garchboot/bootstrap.hpp"
#include "garchboot/config.hpp"
#include "garchboot/csv.hpp"
#include "garchboot/garch.hpp"
#include "garchboot/inference.hpp"
#include "garchboot/qmle.hpp"
#include "garchboot/rng.hpp"
#include "garchboot/stats.hpp"

namespace garchboot {

inline constexpr std::string_view kVersion = "garchboot 0.1.0";

/**
 * Everything an experiment needs: the truth, the innovation law, the
 * Monte-Carlo sizes, the bootstrap settings, and the fit configuration.
 * Values come from built-in defaults, then the config file, then CLI
 * flags, in that order of precedence.
 */
struct ExperimentConfig {
    GarchSpec model{1.0, {0.5}, {}};  // true parameters theta_0
    InnovationDistribution dist = InnovationDistribution::gaussian();

    std::size_t n = 1000;        // sample size per replication
    std::size_t R = 1000;        // Monte-Carlo replications
    std::size_t B = 100;         // bootstrap replicates per sample
    std::size_t N = 1000000;     // long-simulation length for J
    std::size_t burn_in = 1000;  // simulation burn-in

    WeightScheme scheme = WeightScheme::multinomial();
    std::vector<std::string> methods{"wb", "rb", "empirical"};
    std::vector<double> levels{0.95, 0.99};
    std::string ci_method = "percentile";  // or "basic"
    std::string kappa_mode = "residuals";  // or "oracle"

    std::vector<double> n_values{500, 1000, 2000};
    std::vector<std::string> dists{"gaussian", "t5", "t3"};
    std::string omega_grid = "0.25:3.0:8";
    std::string alpha_grid = "0.05:0.9:8";

    FitConfig fit;

    std::uint64_t master_seed = 20230415;
    unsigned threads = 1;
    std::string output_dir = "out";

    static const std::vector<std::string>& known_keys() {
        static const std::vector<std::string> keys{
            "omega0", "alpha0", "beta0", "dist", "n", "R", "B", "N", "burn_in",
            "scheme", "methods", "levels", "ci_method", "kappa_mode",
            "n_values", "dists", "omega_grid", "alpha_grid",
            "q", "p", "n_starts", "max_iterations", "tol_objective", "tol_simplex",
            "omega_min", "omega_max_factor", "coef_max", "start_sum_cap",
            "seed", "threads", "out"};
        return keys;
    }

    /// Applies a key=value layer on top of the current values. All-or-
    /// nothing: a validation failure leaves the object unchanged.
    void apply(const KeyValueConfig& kv) {
        ExperimentConfig next = *this;
        next.apply_in_place(kv);
        *this = next;
    }

private:
    void apply_in_place(const KeyValueConfig& kv) {
        kv.validate_keys(known_keys());

        GarchSpec truth = model;
        truth.omega = kv.get_double("omega0", truth.omega);
        truth.alpha = kv.get_double_list("alpha0", truth.alpha);
        truth.beta = kv.get_double_list("beta0", truth.beta);
        truth.validate();
        model = truth;

        if (kv.has("dist")) dist = InnovationDistribution::parse(kv.get_string("dist", ""));

        n = static_cast<std::size_t>(kv.get_u64("n", n));
        R = static_cast<std::size_t>(kv.get_u64("R", R));
        B = static_cast<std::size_t>(kv.get_u64("B", B));
        N = static_cast<std::size_t>(kv.get_u64("N", N));
        burn_in = static_cast<std::size_t>(kv.get_u64("burn_in", burn_in));

        if (kv.has("scheme")) scheme = WeightScheme::parse(kv.get_string("scheme", ""));
        methods = kv.get_string_list("methods", methods);
        levels = kv.get_double_list("levels", levels);
        ci_method = kv.get_string("ci_method", ci_method);
        kappa_mode = kv.get_string("kappa_mode", kappa_mode);
        n_values = kv.get_double_list("n_values", n_values);
        dists = kv.get_string_list("dists", dists);
        omega_grid = kv.get_string("omega_grid", omega_grid);
        alpha_grid = kv.get_string("alpha_grid", alpha_grid);

        fit.q = static_cast<std::size_t>(kv.get_u64("q", fit.q));
        fit.p = static_cast<std::size_t>(kv.get_u64("p", fit.p));
        fit.n_starts = static_cast<std::size_t>(kv.get_u64("n_starts", fit.n_starts));
        fit.max_iterations =
            static_cast<std::size_t>(kv.get_u64("max_iterations", fit.max_iterations));
        fit.tol_objective = kv.get_double("tol_objective", fit.tol_objective);
        fit.tol_simplex = kv.get_double("tol_simplex", fit.tol_simplex);
        fit.omega_min = kv.get_double("omega_min", fit.omega_min);
        fit.omega_max_factor = kv.get_double("omega_max_factor", fit.omega_max_factor);
        fit.coef_max = kv.get_double("coef_max", fit.coef_max);
        fit.start_sum_cap = kv.get_double("start_sum_cap", fit.start_sum_cap);

        master_seed = kv.get_u64("seed", master_seed);
        threads = static_cast<unsigned>(kv.get_u64("threads", threads));
        output_dir = kv.get_string("out", output_dir);

        validate();
    }

public:
    void validate() const {
        if (R < 1) throw ConfigError("R must be >= 1");
        if (B < 1) throw ConfigError("B must be >= 1");
        if (n < 1) throw ConfigError("n must be >= 1");
        if (N < 1) throw ConfigError("N must be >= 1");
        if (ci_method != "percentile" && ci_method != "basic")
            throw ConfigError("ci_method must be 'percentile' or 'basic'");
        if (kappa_mode != "residuals" && kappa_mode != "oracle")
            throw ConfigError("kappa_mode must be 'residuals' or 'oracle'");
        for (double level : levels)
            if (!(level > 0.0 && level < 1.0)) throw ConfigError("levels must lie in (0,1)");
        for (const auto& m : methods)
            if (m != "wb" && m != "rb" && m != "qmle" && m != "empirical")
                throw ConfigError("unknown method: '" + m + "'");
    }

    [[nodiscard]] std::string echo() const {
        std::ostringstream os;
        os << "omega0=" << format_double(model.omega) << '\n';
        os << "alpha0=";
        for (std::size_t i = 0; i < model.alpha.size(); ++i)
            os << (i ? "," : "") << format_double(model.alpha[i]);
        os << '\n' << "beta0=";
        for (std::size_t j = 0; j < model.beta.size(); ++j)
            os << (j ? "," : "") << format_double(model.beta[j]);
        os << '\n';
        os << "dist=" << dist.label() << '\n';
        os << "n=" << n << "\nR=" << R << "\nB=" << B << "\nN=" << N << '\n';
        os << "burn_in=" << burn_in << '\n';
        os << "scheme=" << scheme.label() << '\n';
        os << "ci_method=" << ci_method << "\nkappa_mode=" << kappa_mode << '\n';
        os << "q=" << fit.q << "\np=" << fit.p << '\n';
        os << "seed=" << master_seed << "\nthreads=" << threads << '\n';
        return os.str();
    }
};

/// Results of R replications, kept in replication order; failed slots stay
/// empty so aggregation never depends on scheduling.
template <typename Result>
struct ReplicationOutcome {
    std::vector<std::optional<Result>> slots;
    std::size_t failures = 0;

    [[nodiscard]] std::vector<Result> collect() const {
        std::vector<Result> out;
        out.reserve(slots.size());
        for (const auto& s : slots)
            if (s) out.push_back(*s);
        return out;
    }
};

/**
 * Runs R independent replications on a small worker pool. Replication r
 * receives the derived seed H(master_seed, r, label), so streams never
 * collide across experiments and the outcome does not depend on the
 * number of threads. A throwing replication is counted, logged, and the
 * experiment continues.
 */
template <typename Result, typename Task>
ReplicationOutcome<Result> run_replications(std::size_t R, unsigned threads,
                                            std::uint64_t master_seed, std::string_view label,
                                            Task&& task) {
    ReplicationOutcome<Result> outcome;
    outcome.slots.resize(R);

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> failures{0};
    std::mutex log_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= R) return;
            const std::uint64_t rep_seed = derive_seed(master_seed, r, label);
            try {
                outcome.slots[r] = task(r, rep_seed);
            } catch (const std::exception& e) {
                failures.fetch_add(1);
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "replication " << r << " failed: " << e.what() << '\n';
            }
        }
    };

    const unsigned k = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(R)));
    if (k == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(k);
        for (unsigned i = 0; i < k; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    outcome.failures = failures.load();
    return outcome;
}

// ---------------------------------------------------------------------------
// Experiment engines. Each returns plain row structs; the CLI serializes
// them. Rows are deterministic functions of the configuration.
// ---------------------------------------------------------------------------

struct SimulateRow {
    std::size_t t;
    double x;
    double h;
};

inline std::vector<SimulateRow> run_simulate(const ExperimentConfig& cfg) {
    const SamplePath path = simulate(cfg.model, cfg.dist, cfg.n, cfg.burn_in,
                                     derive_seed(cfg.master_seed, 0, "simulate"));
    std::vector<SimulateRow> rows;
    rows.reserve(path.size());
    for (std::size_t t = 0; t < path.size(); ++t)
        rows.push_back({t + 1, path.values[t], (*path.true_variances)[t]});
    return rows;
}

struct FitSummary {
    QmleFit fit;
    std::size_t n = 0;
    double kappa = 0.0;
    std::vector<double> std_errors;  // empty when unavailable
    std::string se_note;
};

inline FitSummary run_fit(const ExperimentConfig& cfg, const std::vector<double>& series) {
    const std::size_t minimum = 20 * (cfg.fit.q + cfg.fit.p + 1);
    if (series.size() < minimum)
        throw ConfigError("sample too short: need at least " + std::to_string(minimum) +
                          " observations for a (q=" + std::to_string(cfg.fit.q) +
                          ", p=" + std::to_string(cfg.fit.p) + ") fit, got " +
                          std::to_string(series.size()));

    SamplePath sample;
    sample.values = series;

    FitSummary summary;
    summary.fit = fit_qmle(sample, cfg.fit);
    summary.n = series.size();
    summary.kappa = cfg.kappa_mode == "oracle" ? cfg.dist.kurtosis()
                                               : estimate_kurtosis(summary.fit.residuals);

    if (!std::isfinite(summary.kappa) || summary.kappa <= 1.0) {
        summary.se_note = "asymptotic standard errors unavailable: kappa not finite or <= 1";
        return summary;
    }
    if (!is_second_order_stationary(summary.fit.theta_hat)) {
        summary.se_note =
            "asymptotic standard errors unavailable: fitted model not second-order stationary";
        return summary;
    }
    const JEstimate j = estimate_J(summary.fit.theta_hat, cfg.dist, cfg.N,
                                   derive_seed(cfg.master_seed, 0, "fit-J"));
    const Eigen::MatrixXd cov = asymptotic_covariance(j, summary.kappa);
    summary.std_errors.resize(summary.fit.theta_hat.dim());
    for (std::size_t i = 0; i < summary.std_errors.size(); ++i)
        summary.std_errors[i] = std::sqrt(cov(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(i)) /
                                          static_cast<double>(summary.n));
    return summary;
}

struct ContourRow {
    double omega0;
    double alpha0;
    double var_omega;
    double cov;
    double var_alpha;
};

/// "min:max:count" -> inclusive linear grid.
inline std::vector<double> parse_grid(const std::string& text) {
    const auto parts = KeyValueConfig::split(text, ':');
    if (parts.size() != 3) throw ConfigError("grid must be min:max:count, got '" + text + "'");
    const double lo = KeyValueConfig::parse_double("grid", parts[0]);
    const double hi = KeyValueConfig::parse_double("grid", parts[1]);
    const auto count = static_cast<std::size_t>(KeyValueConfig::parse_double("grid", parts[2]));
    if (count < 1 || hi < lo) throw ConfigError("bad grid: '" + text + "'");
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = count == 1 ? lo
                             : lo + (hi - lo) * static_cast<double>(i) /
                                   static_cast<double>(count - 1);
    return grid;
}

/// The three distinct elements of (kappa-1) J^{-1} over an ARCH(1)
/// (omega0, alpha0) grid.
inline std::vector<ContourRow> run_contour(const ExperimentConfig& cfg) {
    const std::vector<double> omegas = parse_grid(cfg.omega_grid);
    const std::vector<double> alphas = parse_grid(cfg.alpha_grid);
    const double kappa = cfg.dist.kurtosis();
    if (!std::isfinite(kappa)) throw ConfigError("contour needs a finite-kurtosis distribution");

    std::vector<ContourRow> rows;
    rows.reserve(omegas.size() * alphas.size());
    std::size_t idx = 0;
    for (double w : omegas) {
        for (double a : alphas) {
            if (!(a < 1.0)) throw ConfigError("contour alpha grid must stay below 1");
            const GarchSpec spec(w, {a});
            const JEstimate j =
                estimate_J(spec, cfg.dist, cfg.N, derive_seed(cfg.master_seed, idx++, "contour"));
            const Eigen::MatrixXd cov = asymptotic_covariance(j, kappa);
            rows.push_back({w, a, cov(0, 0), cov(0, 1), cov(1, 1)});
        }
    }
    return rows;
}

struct ConvergenceRow {
    std::size_t n;
    std::string method;
    std::string elem;
    double ratio;
};

namespace detail {

inline std::vector<std::string> covariance_element_labels(const GarchSpec& model) {
    const auto names = model.parameter_names();
    if (names.size() == 2) return {"var_omega", "cov", "var_alpha"};
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i; j < names.size(); ++j)
            labels.push_back(names[i] + ":" + names[j]);
    return labels;
}

inline std::vector<double> covariance_elements(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i; j < m.cols(); ++j) out.push_back(m(i, j));
    return out;
}

}  // namespace detail

/// Theoretical covariance of the limit law at the configured truth.
inline Eigen::MatrixXd theory_covariance(const ExperimentConfig& cfg) {
    const double kappa = cfg.dist.kurtosis();
    if (!std::isfinite(kappa))
        throw ConfigError("theoretical covariance needs a finite-kurtosis distribution");
    const JEstimate j =
        estimate_J(cfg.model, cfg.dist, cfg.N, derive_seed(cfg.master_seed, 0, "theory-J"));
    return asymptotic_covariance(j, kappa);
}

/**
 * Elementwise ratio of n * cov(estimates) to the theoretical matrix for
 * one method and one sample size. "qmle" uses the R base estimates; "wb"
 * and "rb" pool all R*B bootstrap replicates.
 */
inline std::vector<ConvergenceRow> convergence_ratios_for(const ExperimentConfig& cfg,
                                                          const std::string& method,
                                                          std::size_t n,
                                                          const Eigen::MatrixXd& theory,
                                                          std::size_t* failures_out = nullptr) {
    const std::string label = "convergence:" + method + ":" + std::to_string(n);
    const auto d = static_cast<Eigen::Index>(cfg.model.dim());

    std::vector<Eigen::VectorXd> pooled;
    std::size_t failures = 0;

    if (method == "qmle") {
        auto outcome = run_replications<Eigen::VectorXd>(
            cfg.R, cfg.threads, cfg.master_seed, label,
            [&](std::size_t, std::uint64_t rep_seed) {
                const SamplePath sample =
                    simulate(cfg.model, cfg.dist, n, cfg.burn_in, rep_seed);
                return fit_qmle(sample, cfg.fit).theta_hat.to_vector();
            });
        pooled = outcome.collect();
        failures = outcome.failures;
    } else if (method == "wb" || method == "rb") {
        auto outcome = run_replications<Eigen::MatrixXd>(
            cfg.R, cfg.threads, cfg.master_seed, label,
            [&](std::size_t, std::uint64_t rep_seed) {
                const SamplePath sample =
                    simulate(cfg.model, cfg.dist, n, cfg.burn_in, rep_seed);
                const std::uint64_t boot_seed = derive_seed(rep_seed, 1, "boot");
                if (method == "wb")
                    return fit_weighted_bootstrap(sample, cfg.scheme, cfg.B, cfg.fit, boot_seed)
                        .replicates;
                const QmleFit base = fit_qmle(sample, cfg.fit);
                return residual_bootstrap(sample, base, cfg.B, cfg.fit, boot_seed).replicates;
            });
        for (const auto& m : outcome.collect())
            for (Eigen::Index r = 0; r < m.rows(); ++r) pooled.push_back(m.row(r));
        failures = outcome.failures;
    } else {
        throw ConfigError("convergence: unknown method '" + method + "'");
    }

    if (failures_out) *failures_out = failures;
    if (pooled.size() < 2) throw ConfigError("convergence: too few successful replications");

    Eigen::MatrixXd mat(static_cast<Eigen::Index>(pooled.size()), d);
    for (std::size_t r = 0; r < pooled.size(); ++r)
        mat.row(static_cast<Eigen::Index>(r)) = pooled[r];
    const Eigen::MatrixXd cov = sample_covariance_rows(mat) * static_cast<double>(n);

    const auto labels = detail::covariance_element_labels(cfg.model);
    const auto elems = detail::covariance_elements(cov);
    const auto theos = detail::covariance_elements(theory);

    std::vector<ConvergenceRow> rows;
    for (std::size_t k = 0; k < labels.size(); ++k)
        rows.push_back({n, method, labels[k], elems[k] / theos[k]});
    return rows;
}

inline std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg,
                                                   std::size_t* failures_out = nullptr) {
    const Eigen::MatrixXd theory = theory_covariance(cfg);
    std::vector<ConvergenceRow> rows;
    std::size_t failures_total = 0;
    for (const auto& method : cfg.methods) {
        if (method == "empirical") continue;  // ellipse-only method label
        for (double n_value : cfg.n_values) {
            std::size_t failures = 0;
            const auto batch = convergence_ratios_for(
                cfg, method, static_cast<std::size_t>(n_value), theory, &failures);
            failures_total += failures;
            rows.insert(rows.end(), batch.begin(), batch.end());
        }
    }
    if (failures_out) *failures_out = failures_total;
    return rows;
}

struct SaeRow {
    std::string dist;
    std::size_t n;
    std::size_t rep;
    double sae;
};

/// Per-replication sum of absolute errors for each (distribution, n).
inline std::vector<SaeRow> run_sae(const ExperimentConfig& cfg) {
    std::vector<SaeRow> rows;
    const Eigen::VectorXd truth = cfg.model.to_vector();
    for (const auto& dist_label : cfg.dists) {
        const InnovationDistribution dist = InnovationDistribution::parse(dist_label);
        for (double n_value : cfg.n_values) {
            const auto n = static_cast<std::size_t>(n_value);
            const std::string label = "sae:" + dist_label + ":" + std::to_string(n);
            auto outcome = run_replications<SaeRow>(
                cfg.R, cfg.threads, cfg.master_seed, label,
                [&](std::size_t rep, std::uint64_t rep_seed) {
                    const SamplePath sample = simulate(cfg.model, dist, n, cfg.burn_in, rep_seed);
                    const QmleFit fit = fit_qmle(sample, cfg.fit);
                    return SaeRow{dist_label, n, rep + 1,
                                  sae(fit.theta_hat.to_vector(), truth)};
                });
            for (const auto& row : outcome.collect()) rows.push_back(row);
        }
    }
    return rows;
}

struct CoverageRow {
    std::string kind;    // "interval" or "ellipse"
    std::string method;  // "wb", "rb", "empirical"
    std::size_t n;
    double level;
    std::string param;  // parameter name, or "all" for ellipses
    std::size_t reps;
    std::size_t below;
    std::size_t inside;
    std::size_t above;  // for ellipses: the outside count
};

inline std::vector<CoverageRow> run_coverage(const ExperimentConfig& cfg) {
    const Eigen::VectorXd truth = cfg.model.to_vector();
    const auto names = cfg.model.parameter_names();
    const std::size_t d = cfg.model.dim();
    std::vector<CoverageRow> rows;

    for (const auto& method : cfg.methods) {
        if (method == "qmle") continue;  // convergence-only method label

        if (method == "empirical") {
            const Eigen::MatrixXd cov = theory_covariance(cfg);
            auto outcome = run_replications<Eigen::VectorXd>(
                cfg.R, cfg.threads, cfg.master_seed, "coverage:empirical",
                [&](std::size_t, std::uint64_t rep_seed) {
                    const SamplePath sample =
                        simulate(cfg.model, cfg.dist, cfg.n, cfg.burn_in, rep_seed);
                    return fit_qmle(sample, cfg.fit).theta_hat.to_vector();
                });
            const auto estimates = outcome.collect();
            for (double level : cfg.levels) {
                std::size_t inside = 0;
                for (const auto& est : estimates) {
                    const ConfidenceEllipse e = confidence_ellipse(est, cov, cfg.n, level);
                    if (ellipse_contains(e, truth)) ++inside;
                }
                rows.push_back({"ellipse", method, cfg.n, level, "all", estimates.size(), 0,
                                inside, estimates.size() - inside});
            }
            continue;
        }

        // interval coverage for the bootstrap methods
        using RecordGrid = std::vector<CoverageRecord>;  // level-major, then parameter
        auto outcome = run_replications<RecordGrid>(
            cfg.R, cfg.threads, cfg.master_seed, "coverage:" + method,
            [&](std::size_t, std::uint64_t rep_seed) {
                const SamplePath sample =
                    simulate(cfg.model, cfg.dist, cfg.n, cfg.burn_in, rep_seed);
                const std::uint64_t boot_seed = derive_seed(rep_seed, 1, "boot");
                BootstrapResult boot = [&] {
                    if (method == "wb")
                        return fit_weighted_bootstrap(sample, cfg.scheme, cfg.B, cfg.fit,
                                                      boot_seed);
                    const QmleFit base = fit_qmle(sample, cfg.fit);
                    return residual_bootstrap(sample, base, cfg.B, cfg.fit, boot_seed);
                }();
                RecordGrid records;
                records.reserve(cfg.levels.size() * d);
                for (double level : cfg.levels) {
                    for (std::size_t i = 0; i < d; ++i) {
                        const ConfidenceInterval ci =
                            cfg.ci_method == "basic" ? basic_interval(boot, i, level)
                                                     : percentile_interval(boot, i, level);
                        records.push_back(CoverageRecord::for_interval(
                            ci, truth[static_cast<Eigen::Index>(i)]));
                    }
                }
                return records;
            });

        const auto grids = outcome.collect();
        for (std::size_t li = 0; li < cfg.levels.size(); ++li) {
            for (std::size_t i = 0; i < d; ++i) {
                std::size_t below = 0, inside = 0, above = 0;
                for (const auto& grid : grids) {
                    const CoverageRecord& rec = grid[li * d + i];
                    below += rec.below;
                    inside += rec.inside;
                    above += rec.above;
                }
                rows.push_back({"interval", method, cfg.n, cfg.levels[li], names[i],
                                grids.size(), below, inside, above});
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CSV serialization of the engine outputs.
// ---------------------------------------------------------------------------

inline void write_simulate_csv(const std::string& path, const std::vector<SimulateRow>& rows) {
    CsvWriter csv(path, {"t", "x", "h"});
    for (const auto& r : rows)
        csv.write_row({std::to_string(r.t), format_double(r.x), format_double(r.h)});
}

inline void write_fit_csv(const std::string& path, const FitSummary& summary) {
    CsvWriter csv(path, {"param", "estimate", "std_error"});
    const auto names = summary.fit.theta_hat.parameter_names();
    const Eigen::VectorXd est = summary.fit.theta_hat.to_vector();
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string se = summary.std_errors.empty()
                                   ? "nan"
                                   : format_double(summary.std_errors[i]);
        csv.write_row({names[i], format_double(est[static_cast<Eigen::Index>(i)]), se});
    }
}

inline void write_contour_csv(const std::string& path, const std::vector<ContourRow>& rows) {
    CsvWriter csv(path, {"omega0", "alpha0", "var_omega", "cov", "var_alpha"});
    for (const auto& r : rows)
        csv.write_row({format_double(r.omega0), format_double(r.alpha0),
                       format_double(r.var_omega), format_double(r.cov),
                       format_double(r.var_alpha)});
}

inline void write_convergence_csv(const std::string& path,
                                  const std::vector<ConvergenceRow>& rows) {
    CsvWriter csv(path, {"n", "method", "elem", "ratio"});
    for (const auto& r : rows)
        csv.write_row({std::to_string(r.n), r.method, r.elem, format_double(r.ratio)});
}

inline void write_sae_csv(const std::string& path, const std::vector<SaeRow>& rows) {
    CsvWriter csv(path, {"dist", "n", "rep", "sae"});
    for (const auto& r : rows)
        csv.write_row({r.dist, std::to_string(r.n), std::to_string(r.rep), format_double(r.sae)});
}

inline void write_coverage_csv(const std::string& path, const std::vector<CoverageRow>& rows) {
    CsvWriter csv(path, {"kind", "method", "n", "level", "param", "reps", "below", "inside",
                         "above", "below_pct", "inside_pct", "above_pct"});
    for (const auto& r : rows) {
        const double total = static_cast<double>(r.reps);
        csv.write_row({r.kind, r.method, std::to_string(r.n), format_double(r.level), r.param,
                       std::to_string(r.reps), std::to_string(r.below), std::to_string(r.inside),
                       std::to_string(r.above), format_double(100.0 * r.below / total),
                       format_double(100.0 * r.inside / total),
                       format_double(100.0 * r.above / total)});
    }
}

/// Config echo, version, and wall time; kept out of the CSV files so
/// those stay byte-identical across runs.
inline void write_meta(const std::string& path, const ExperimentConfig& cfg,
                       double wall_seconds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "version: " << kVersion << '\n';
    out << "wall_seconds: " << wall_seconds << '\n';
    out << "config:\n";
    std::istringstream echo(cfg.echo());
    std::string line;
    while (std::getline(echo, line)) out << "  " << line << '\n';
}

}  // namespace garchboot
