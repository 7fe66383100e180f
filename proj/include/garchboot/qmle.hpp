#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "garchboot/garch.hpp"
#include "garchboot/nelder_mead.hpp"
#include "garchboot/rng.hpp"
#include "garchboot/stats.hpp"

namespace garchboot {

/**
 * Settings of the quasi-likelihood minimization. Readable from the
 * harness configuration file; the model orders to fit ride along because
 * the estimator needs them and the sample does not carry them.
 */
struct FitConfig {
    std::size_t q = 1;  // ARCH order of the fitted model
    std::size_t p = 0;  // GARCH order of the fitted model

    std::size_t n_starts = 5;
    std::size_t max_iterations = 2000;
    double tol_objective = 1e-10;
    double tol_simplex = 1e-8;

    double omega_min = 1e-6;
    double omega_max_factor = 10.0;  // omega upper bound = factor * mean(x^2)
    double coef_max = 0.9999;        // box bound for each alpha_i, beta_j
    double start_sum_cap = 0.95;     // random starts keep sum(alpha)+sum(beta) below this
    double beta_sum_penalty = 1e6;   // objective penalty per unit of sum(beta) above coef_max

    // Fixed seed of the random multi-starts, so fits are deterministic
    // functions of (sample, config).
    std::uint64_t start_seed = 0x51ab5eedULL;
};

/// Conditional-variance sequence sigma~^2_t(theta) of a sample under theta.
struct CondVarSeries {
    std::vector<double> sigma2;
    GarchSpec theta;
};

namespace detail {

/**
 * Streaming evaluation of the variance recursion
 *   sigma~^2_t = omega + sum_i alpha_i x_{t-i}^2 + sum_j beta_j sigma~^2_{t-j}
 * with the presample convention x_0^2 = ... = x_{1-q}^2 = x_1^2 and
 * sigma~^2_0 = ... = sigma~^2_{1-p} = x_1^2. Calls visit(t, sigma2_t) for
 * t = 0..n-1 (0-based).
 */
template <typename Visitor>
inline void for_each_conditional_variance(const GarchSpec& theta, const double* x, std::size_t n,
                                          Visitor&& visit) {
    const std::size_t q = theta.q();
    const std::size_t p = theta.p();
    const double x1sq = x[0] * x[0];

    // sig_lag[j] = sigma~^2_{t-1-j}, newest first
    double sig_lag_small[4];
    std::vector<double> sig_lag_heap;
    double* sig_lag = sig_lag_small;
    if (p > 4) {
        sig_lag_heap.assign(p, x1sq);
        sig_lag = sig_lag_heap.data();
    } else {
        for (std::size_t j = 0; j < p; ++j) sig_lag_small[j] = x1sq;
    }

    for (std::size_t t = 0; t < n; ++t) {
        double s2 = theta.omega;
        for (std::size_t i = 1; i <= q; ++i) {
            const double xl = (t >= i) ? x[t - i] : x[0];
            s2 += theta.alpha[i - 1] * (xl * xl);
        }
        for (std::size_t j = 0; j < p; ++j) s2 += theta.beta[j] * sig_lag[j];

        visit(t, s2);

        if (p > 0) {
            for (std::size_t j = p - 1; j > 0; --j) sig_lag[j] = sig_lag[j - 1];
            sig_lag[0] = s2;
        }
    }
}

/// (1/n) sum_t w_t (x_t^2 / sigma~^2_t + log sigma~^2_t); weights may be null.
inline double weighted_objective_core(const GarchSpec& theta, const double* x, std::size_t n,
                                      const double* weights) {
    double acc = 0.0;
    for_each_conditional_variance(theta, x, n, [&](std::size_t t, double s2) {
        const double term = x[t] * x[t] / s2 + std::log(s2);
        acc += weights ? weights[t] * term : term;
    });
    return acc / static_cast<double>(n);
}

}  // namespace detail

/// sigma~^2_t(theta) for t = 1..n under the fixed presample convention.
inline CondVarSeries conditional_variances(const GarchSpec& theta, const SamplePath& sample) {
    theta.validate();
    if (sample.size() == 0) throw std::invalid_argument("conditional_variances: empty sample");
    CondVarSeries out;
    out.theta = theta;
    out.sigma2.resize(sample.size());
    detail::for_each_conditional_variance(theta, sample.values.data(), sample.size(),
                                          [&](std::size_t t, double s2) { out.sigma2[t] = s2; });
    return out;
}

/// I_n(theta) = (1/n) sum_t [x_t^2 / sigma~^2_t + log sigma~^2_t].
inline double negative_quasi_loglik(const GarchSpec& theta, const SamplePath& sample) {
    theta.validate();
    if (sample.size() == 0) throw std::invalid_argument("negative_quasi_loglik: empty sample");
    return detail::weighted_objective_core(theta, sample.values.data(), sample.size(), nullptr);
}

/// Result of the quasi-likelihood minimization.
struct QmleFit {
    GarchSpec theta_hat;
    double neg_loglik = 0.0;
    std::vector<double> residuals;  // eta~_t = x_t / sigma^_t(theta^)
    bool converged = false;
    std::size_t iterations = 0;
    bool boundary_flag = false;  // some parameter ended on its box bound
};

namespace detail {

struct FitCandidate {
    Eigen::VectorXd x;
    double value = std::numeric_limits<double>::infinity();
    bool converged = false;
    std::size_t iterations = 0;
};

/**
 * Shared minimization driver for the plain and the weighted objective.
 * Box: omega in [omega_min, omega_max_factor * mean(x^2)], coefficients in
 * [0, coef_max]; sum(beta) above coef_max is discouraged by a linear
 * penalty added to the objective.
 */
class FitDriver {
public:
    FitDriver(const SamplePath& sample, const FitConfig& cfg)
        : sample_(sample), cfg_(cfg), dim_(1 + cfg.q + cfg.p) {
        if (sample.size() < std::max(cfg.q, cfg.p) + 1)
            throw std::invalid_argument("fit: sample too short for the requested orders");
        sample_msq_ = mean_square(sample.values);
        if (!(sample_msq_ > 0.0))
            throw std::invalid_argument("fit: sample is identically zero");

        lower_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
        upper_ = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim_), cfg.coef_max);
        lower_[0] = cfg.omega_min;
        upper_[0] = std::max(cfg.omega_min * 2.0, cfg.omega_max_factor * sample_msq_);
    }

    [[nodiscard]] const Eigen::VectorXd& lower() const noexcept { return lower_; }
    [[nodiscard]] const Eigen::VectorXd& upper() const noexcept { return upper_; }

    double objective(const Eigen::VectorXd& v, const double* weights) const {
        const GarchSpec theta = spec_from(v);
        double value = weighted_objective_core(theta, sample_.values.data(), sample_.size(), weights);
        double beta_sum = 0.0;
        for (std::size_t j = 0; j < cfg_.p; ++j) beta_sum += theta.beta[j];
        if (beta_sum > cfg_.coef_max) value += cfg_.beta_sum_penalty * (beta_sum - cfg_.coef_max);
        return value;
    }

    FitCandidate minimize_from(const Eigen::VectorXd& start, const double* weights) const {
        NelderMeadOptions opt;
        opt.max_iterations = cfg_.max_iterations;
        opt.tol_objective = cfg_.tol_objective;
        opt.tol_simplex = cfg_.tol_simplex;
        const auto res = nelder_mead_box(
            [&](const Eigen::VectorXd& v) { return objective(v, weights); }, start, lower_, upper_,
            opt);
        return FitCandidate{res.x, res.value, res.converged, res.iterations};
    }

    /// Deterministic start points: one moment-guided, the rest random in
    /// the box with sum(alpha)+sum(beta) capped.
    [[nodiscard]] std::vector<Eigen::VectorXd> start_points() const {
        std::vector<Eigen::VectorXd> starts;
        Eigen::VectorXd s0(static_cast<Eigen::Index>(dim_));
        s0[0] = std::clamp(0.1 * sample_msq_, lower_[0], upper_[0]);
        for (std::size_t i = 0; i < cfg_.q; ++i)
            s0[1 + static_cast<Eigen::Index>(i)] = 0.1 / static_cast<double>(cfg_.q);
        for (std::size_t j = 0; j < cfg_.p; ++j)
            s0[1 + static_cast<Eigen::Index>(cfg_.q + j)] = 0.8 / static_cast<double>(cfg_.p);
        starts.push_back(s0);

        Rng rng(cfg_.start_seed);
        while (starts.size() < cfg_.n_starts) {
            Eigen::VectorXd s(static_cast<Eigen::Index>(dim_));
            // log-uniform omega spreads starts across the box's decades
            const double lo = std::max(cfg_.omega_min, 1e-3 * sample_msq_);
            const double hi = upper_[0];
            s[0] = lo * std::exp(rng.uniform() * std::log(hi / lo));
            double coef_sum = 0.0;
            for (std::size_t k = 1; k < dim_; ++k) {
                s[static_cast<Eigen::Index>(k)] = rng.uniform() * cfg_.coef_max;
                coef_sum += s[static_cast<Eigen::Index>(k)];
            }
            if (coef_sum > cfg_.start_sum_cap) {
                const double shrink = cfg_.start_sum_cap * rng.uniform() / coef_sum;
                for (std::size_t k = 1; k < dim_; ++k) s[static_cast<Eigen::Index>(k)] *= shrink;
            }
            starts.push_back(s);
        }
        return starts;
    }

    /// Best of the multi-starts; ties broken by start index so the result
    /// does not depend on evaluation order.
    FitCandidate best_of_starts(const double* weights) const {
        FitCandidate best;
        for (const auto& s : start_points()) {
            FitCandidate c = minimize_from(s, weights);
            if (c.value < best.value) best = std::move(c);
        }
        return best;
    }

    [[nodiscard]] GarchSpec spec_from(const Eigen::VectorXd& v) const {
        return GarchSpec::from_vector(cfg_.q, cfg_.p, v);
    }

    [[nodiscard]] bool on_boundary(const Eigen::VectorXd& v) const {
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double tol = 1e-9 * std::max(1.0, std::abs(upper_[i]));
            if (v[i] <= lower_[i] + tol || v[i] >= upper_[i] - tol) return true;
        }
        return false;
    }

    QmleFit to_fit(const FitCandidate& c) const {
        QmleFit fit;
        fit.theta_hat = spec_from(c.x);
        fit.neg_loglik = negative_quasi_loglik(fit.theta_hat, sample_);
        fit.converged = c.converged;
        fit.iterations = c.iterations;
        fit.boundary_flag = on_boundary(c.x);
        fit.residuals.resize(sample_.size());
        detail::for_each_conditional_variance(
            fit.theta_hat, sample_.values.data(), sample_.size(),
            [&](std::size_t t, double s2) { fit.residuals[t] = sample_.values[t] / std::sqrt(s2); });
        return fit;
    }

private:
    const SamplePath& sample_;
    FitConfig cfg_;
    std::size_t dim_;
    double sample_msq_ = 0.0;
    Eigen::VectorXd lower_, upper_;
};

}  // namespace detail

/**
 * Box-constrained multi-start Nelder-Mead minimization of I_n. The
 * returned objective never exceeds the objective at any start point.
 * Throws when the sample is shorter than max(p,q)+1.
 */
inline QmleFit fit_qmle(const SamplePath& sample, const FitConfig& config = {}) {
    detail::FitDriver driver(sample, config);
    return driver.to_fit(driver.best_of_starts(nullptr));
}

/// J and the kurtosis that goes with it, from a long simulation at theta.
struct JEstimate {
    Eigen::MatrixXd J;
    std::size_t N = 0;
    double kappa = 0.0;
};

/**
 * Simulation estimate of J = E[(1/sigma_t^4) d sigma_t^2/d theta d sigma_t^2/d theta^T]
 * at theta. The ARCH(1) case uses the closed-form gradient (1, x_{t-1}^2);
 * the general case runs the derivative recursion obtained by
 * differentiating the variance recursion, with the gradient state started
 * at zero and the first 500 steps discarded so it forgets initialization.
 */
inline JEstimate estimate_J(const GarchSpec& theta, const InnovationDistribution& dist,
                            std::size_t N, std::uint64_t seed) {
    theta.validate();
    if (!is_second_order_stationary(theta))
        throw std::invalid_argument("estimate_J: theta must be second-order stationary");
    if (N == 0) throw std::invalid_argument("estimate_J: N must be positive");

    const std::size_t q = theta.q();
    const std::size_t p = theta.p();
    const auto d = static_cast<Eigen::Index>(theta.dim());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);

    if (q == 1 && p == 0) {
        // closed form: sigma^2_{t+1} = omega + alpha x_t^2, gradient (1, x_t^2)
        const SamplePath path = simulate(theta, dist, N, /*burn_in=*/1000, seed);
        for (std::size_t t = 0; t < N; ++t) {
            const double xsq = path.values[t] * path.values[t];
            const double s2 = theta.omega + theta.alpha[0] * xsq;
            const double inv_s4 = 1.0 / (s2 * s2);
            acc(0, 0) += inv_s4;
            acc(0, 1) += inv_s4 * xsq;
            acc(1, 1) += inv_s4 * xsq * xsq;
        }
        acc(1, 0) = acc(0, 1);
    } else {
        const std::size_t skip = 500;
        const std::size_t lead = std::max(q, p);
        const SamplePath path = simulate(theta, dist, N + skip + lead, /*burn_in=*/1000, seed);
        const auto& x = path.values;
        const auto& h = *path.true_variances;  // exact sigma_t^2 along the true path

        std::vector<Eigen::VectorXd> grad_lag(p, Eigen::VectorXd::Zero(d));
        Eigen::VectorXd grad(d);
        for (std::size_t t = lead; t < x.size(); ++t) {
            grad[0] = 1.0;
            for (std::size_t i = 1; i <= q; ++i)
                grad[static_cast<Eigen::Index>(i)] = x[t - i] * x[t - i];
            for (std::size_t j = 1; j <= p; ++j)
                grad[static_cast<Eigen::Index>(q + j)] = h[t - j];
            for (std::size_t j = 0; j < p; ++j) grad += theta.beta[j] * grad_lag[j];

            if (t >= lead + skip) {
                const double inv_s4 = 1.0 / (h[t] * h[t]);
                acc.noalias() += inv_s4 * (grad * grad.transpose());
            }
            if (p > 0) {
                for (std::size_t j = p - 1; j > 0; --j) grad_lag[j] = grad_lag[j - 1];
                grad_lag[0] = grad;
            }
        }
    }

    JEstimate est;
    est.J = (acc + acc.transpose()) / (2.0 * static_cast<double>(N));
    est.N = N;
    est.kappa = dist.kurtosis();
    return est;
}

/**
 * (kappa - 1) J^{-1}, the covariance of the limiting normal law.
 * Rejects non-positive-definite or numerically singular J (condition
 * number above 1e12).
 */
inline Eigen::MatrixXd asymptotic_covariance(const JEstimate& j, double kappa) {
    if (!(kappa > 1.0)) throw std::invalid_argument("asymptotic_covariance: kappa must be > 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(j.J);
    const double min_ev = eigen.eigenvalues().minCoeff();
    const double max_ev = eigen.eigenvalues().maxCoeff();
    if (!(min_ev > 0.0) || max_ev / min_ev > 1e12)
        throw std::invalid_argument("asymptotic_covariance: J is singular or near-singular");
    const Eigen::MatrixXd inv = eigen.eigenvectors() *
                                eigen.eigenvalues().cwiseInverse().asDiagonal() *
                                eigen.eigenvectors().transpose();
    return (kappa - 1.0) * ((inv + inv.transpose()) / 2.0);
}

/**
 * Fourth moment (1/n) sum eta^_t^4 of the standardized residuals; the
 * input is standardized (population convention) first.
 */
inline double estimate_kurtosis(const std::vector<double>& residuals) {
    if (residuals.size() < 10)
        throw std::invalid_argument("estimate_kurtosis: need at least 10 residuals");
    const double m = mean(residuals);
    const double var = variance_population(residuals);
    if (!(var > 0.0)) throw std::invalid_argument("estimate_kurtosis: zero-variance residuals");
    const double sd = std::sqrt(var);
    double acc = 0.0;
    for (double r : residuals) {
        const double z = (r - m) / sd;
        acc += z * z * z * z;
    }
    return acc / static_cast<double>(residuals.size());
}

}  // namespace garchboot
