#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "garchboot/garch.hpp"
#include "garchboot/qmle.hpp"
#include "garchboot/rng.hpp"

namespace garchboot {

/**
 * Law of one row (tau_n1, ..., tau_nn) of the bootstrap weight array.
 * gamma() is the limit of E tau^2, the factor by which the weighted
 * bootstrap inflates the limiting covariance. AllOnes is a degenerate
 * test hook: every weight is exactly 1.
 */
class WeightScheme {
public:
    enum class Kind { Multinomial, IidExp1, IidGammaNN, AllOnes };

    static WeightScheme multinomial() { return WeightScheme(Kind::Multinomial); }
    static WeightScheme iid_exp1() { return WeightScheme(Kind::IidExp1); }
    static WeightScheme iid_gamma_nn() { return WeightScheme(Kind::IidGammaNN); }
    static WeightScheme all_ones() { return WeightScheme(Kind::AllOnes); }

    [[nodiscard]] Kind kind() const noexcept { return kind_; }

    [[nodiscard]] double gamma() const noexcept {
        switch (kind_) {
            case Kind::Multinomial: return 2.0;
            case Kind::IidExp1: return 2.0;
            case Kind::IidGammaNN: return 1.0;  // no variance inflation in the limit
            case Kind::AllOnes: return 1.0;
        }
        return 1.0;
    }

    [[nodiscard]] std::string label() const {
        switch (kind_) {
            case Kind::Multinomial: return "multinomial";
            case Kind::IidExp1: return "exp1";
            case Kind::IidGammaNN: return "gamma_nn";
            case Kind::AllOnes: return "all_ones";
        }
        return "?";
    }

    static WeightScheme parse(const std::string& text) {
        if (text == "multinomial") return multinomial();
        if (text == "exp1") return iid_exp1();
        if (text == "gamma_nn") return iid_gamma_nn();
        if (text == "all_ones") return all_ones();
        throw std::invalid_argument("unknown weight scheme: '" + text + "'");
    }

private:
    explicit WeightScheme(Kind k) : kind_(k) {}
    Kind kind_;
};

/**
 * One row of the triangular weight array: Multinomial(n; 1/n,..,1/n)
 * occupation counts (sum exactly n), i.i.d. Exp(1), or i.i.d. Gamma(n,n).
 */
inline std::vector<double> draw_weights(const WeightScheme& scheme, std::size_t n,
                                        std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("draw_weights: n must be positive");
    std::vector<double> weights(n, 1.0);
    Rng rng(seed);
    switch (scheme.kind()) {
        case WeightScheme::Kind::Multinomial: {
            std::vector<std::uint32_t> counts(n, 0);
            for (std::size_t i = 0; i < n; ++i) ++counts[rng.uniform_index(n)];
            for (std::size_t i = 0; i < n; ++i) weights[i] = static_cast<double>(counts[i]);
            break;
        }
        case WeightScheme::Kind::IidExp1:
            for (auto& w : weights) w = rng.exponential();
            break;
        case WeightScheme::Kind::IidGammaNN:
            for (auto& w : weights)
                w = rng.gamma(static_cast<double>(n), static_cast<double>(n));
            break;
        case WeightScheme::Kind::AllOnes:
            break;
    }
    return weights;
}

/// I*_n(theta) = (1/n) sum_t tau_nt [x_t^2 / sigma~^2_t + log sigma~^2_t].
inline double weighted_negative_loglik(const GarchSpec& theta, const SamplePath& sample,
                                       const std::vector<double>& weights) {
    theta.validate();
    if (weights.size() != sample.size())
        throw std::invalid_argument("weighted_negative_loglik: weights length != sample length");
    if (sample.size() == 0) throw std::invalid_argument("weighted_negative_loglik: empty sample");
    return detail::weighted_objective_core(theta, sample.values.data(), sample.size(),
                                           weights.data());
}

/// Replicate estimates theta^*_1..theta^*_B (one per row), successful only.
struct BootstrapResult {
    Eigen::MatrixXd replicates;  // B_ok x (p+q+1)
    std::string scheme_or_method;
    QmleFit base_fit;
    std::size_t failures = 0;  // non-converged replicates, excluded from the rows
    double gamma = 1.0;

    [[nodiscard]] std::size_t attempted() const noexcept {
        return static_cast<std::size_t>(replicates.rows()) + failures;
    }

    /// More than 5% dropped replicates marks the result unreliable.
    [[nodiscard]] bool reliable() const noexcept {
        return attempted() > 0 &&
               static_cast<double>(failures) < 0.05 * static_cast<double>(attempted());
    }
};

namespace detail {

/// Warm-started minimization used by every bootstrap replicate: try the
/// base estimate first, fall back to the full multi-start when that does
/// not converge, and prefer the warm candidate on ties.
inline FitCandidate refit_warm_started(const FitDriver& driver, const Eigen::VectorXd& warm,
                                       const double* weights) {
    FitCandidate best = driver.minimize_from(warm, weights);
    if (!best.converged) {
        const FitCandidate fallback = driver.best_of_starts(weights);
        if (fallback.value < best.value) best = fallback;
    }
    return best;
}

}  // namespace detail

/**
 * Weighted-bootstrap QMLE: for b = 1..B draw a weight row with a derived
 * seed and minimize the weighted objective, warm-started at the base
 * estimate. A constant weight row scales the objective without moving its
 * minimizer, so the replicate is the base estimate itself, exactly; this
 * short-circuit also makes the all-ones test scheme an identity.
 */
inline BootstrapResult fit_weighted_bootstrap(const SamplePath& sample, const WeightScheme& scheme,
                                              std::size_t B, const FitConfig& config,
                                              std::uint64_t seed) {
    if (B < 2) throw std::invalid_argument("fit_weighted_bootstrap: B must be >= 2");
    detail::FitDriver driver(sample, config);
    const QmleFit base = driver.to_fit(driver.best_of_starts(nullptr));
    if (!base.converged)
        throw std::runtime_error("fit_weighted_bootstrap: base fit did not converge");
    const Eigen::VectorXd warm = base.theta_hat.to_vector();

    BootstrapResult result;
    result.scheme_or_method = "wb:" + scheme.label();
    result.base_fit = base;
    result.gamma = scheme.gamma();

    std::vector<Eigen::VectorXd> rows;
    rows.reserve(B);
    for (std::size_t b = 0; b < B; ++b) {
        const std::vector<double> weights =
            draw_weights(scheme, sample.size(), derive_seed(seed, b, "wb-weights"));
        const bool constant_row = std::all_of(weights.begin(), weights.end(), [&](double w) {
            return w == weights.front();
        });
        if (constant_row && weights.front() > 0.0) {
            rows.push_back(warm);
            continue;
        }
        const detail::FitCandidate c = detail::refit_warm_started(driver, warm, weights.data());
        if (c.converged)
            rows.push_back(c.x);
        else
            ++result.failures;
    }

    result.replicates.resize(static_cast<Eigen::Index>(rows.size()), warm.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        result.replicates.row(static_cast<Eigen::Index>(r)) = rows[r];
    return result;
}

/**
 * eta^_t = (eta~_t - mean) / sqrt(mean of squares - mean^2), the
 * population-convention standardization; the output has exact sample mean
 * 0 and sample variance 1.
 */
inline std::vector<double> standardize_residuals(const std::vector<double>& residuals) {
    if (residuals.size() < 2)
        throw std::invalid_argument("standardize_residuals: need at least 2 residuals");
    const double m = mean(residuals);
    const double msq = mean_square(residuals);
    const double var = msq - m * m;
    if (!(var > 0.0)) throw std::invalid_argument("standardize_residuals: zero variance");
    const double sd = std::sqrt(var);
    std::vector<double> out(residuals.size());
    for (std::size_t t = 0; t < residuals.size(); ++t) out[t] = (residuals[t] - m) / sd;
    return out;
}

/**
 * Regenerates a synthetic path from fitted parameters and a given
 * innovation sequence:
 *   (sigma*_t)^2 = omega^ + sum alpha^_i (x*_{t-i})^2 + sum beta^_j (sigma*_{t-j})^2,
 *   x*_t = sigma*_t eta*_t,
 * with every presample (x*)^2 and (sigma*)^2 value seeded at
 * presample_x1^2 (the first observation of the original sample).
 */
inline SamplePath rebuild_from_innovations(const GarchSpec& theta,
                                           const std::vector<double>& innovations,
                                           double presample_x1) {
    theta.validate();
    if (innovations.empty()) throw std::invalid_argument("rebuild_from_innovations: empty input");
    const std::size_t q = theta.q();
    const std::size_t p = theta.p();
    const double x1sq = presample_x1 * presample_x1;

    std::vector<double> xsq_lag(q, x1sq);
    std::vector<double> sig_lag(p, x1sq);

    SamplePath path;
    path.values.resize(innovations.size());
    for (std::size_t t = 0; t < innovations.size(); ++t) {
        double s2 = theta.omega;
        for (std::size_t i = 0; i < q; ++i) s2 += theta.alpha[i] * xsq_lag[i];
        for (std::size_t j = 0; j < p; ++j) s2 += theta.beta[j] * sig_lag[j];
        const double x = std::sqrt(s2) * innovations[t];
        path.values[t] = x;
        if (q > 0) {
            for (std::size_t i = q - 1; i > 0; --i) xsq_lag[i] = xsq_lag[i - 1];
            xsq_lag[0] = x * x;
        }
        if (p > 0) {
            for (std::size_t j = p - 1; j > 0; --j) sig_lag[j] = sig_lag[j - 1];
            sig_lag[0] = s2;
        }
    }
    return path;
}

/**
 * Residual bootstrap: resample the standardized residuals with
 * replacement, regenerate a path from the fitted recursion, refit, and
 * collect the replicate estimates. Requires a converged base fit.
 */
inline BootstrapResult residual_bootstrap(const SamplePath& sample, const QmleFit& fit,
                                          std::size_t B, const FitConfig& config,
                                          std::uint64_t seed) {
    if (B < 1) throw std::invalid_argument("residual_bootstrap: B must be >= 1");
    if (!fit.converged)
        throw std::invalid_argument("residual_bootstrap: base fit did not converge");
    if (sample.size() == 0) throw std::invalid_argument("residual_bootstrap: empty sample");

    const std::vector<double> eta_hat = standardize_residuals(fit.residuals);
    const std::size_t n = sample.size();
    const Eigen::VectorXd warm = fit.theta_hat.to_vector();

    BootstrapResult result;
    result.scheme_or_method = "rb";
    result.base_fit = fit;
    result.gamma = 1.0;

    std::vector<Eigen::VectorXd> rows;
    rows.reserve(B);
    std::vector<double> eta_star(n);
    for (std::size_t b = 0; b < B; ++b) {
        Rng rng(derive_seed(seed, b, "rb-resample"));
        for (std::size_t t = 0; t < n; ++t) eta_star[t] = eta_hat[rng.uniform_index(n)];
        const SamplePath star = rebuild_from_innovations(fit.theta_hat, eta_star, sample.values[0]);

        try {
            detail::FitDriver driver(star, config);
            const detail::FitCandidate c = detail::refit_warm_started(driver, warm, nullptr);
            if (c.converged)
                rows.push_back(c.x);
            else
                ++result.failures;
        } catch (const std::invalid_argument&) {
            ++result.failures;  // e.g. a degenerate regenerated sample
        }
    }

    result.replicates.resize(static_cast<Eigen::Index>(rows.size()), warm.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        result.replicates.row(static_cast<Eigen::Index>(r)) = rows[r];
    return result;
}

}  // namespace garchboot
