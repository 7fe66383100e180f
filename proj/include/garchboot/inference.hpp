#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "garchboot/bootstrap.hpp"
#include "garchboot/stats.hpp"

namespace garchboot {

namespace detail {

/// Regularized lower incomplete gamma P(a,x): series expansion below
/// a+1, modified-Lentz continued fraction above.
inline double regularized_gamma_p(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("regularized_gamma_p: a must be > 0");
    if (x < 0.0) throw std::invalid_argument("regularized_gamma_p: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double gln = std::lgamma(a);
    constexpr int kMaxIter = 500;
    constexpr double kEps = std::numeric_limits<double>::epsilon();
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < kMaxIter; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

/// Inverse of P(a,.): Halley iteration from a Wilson-Hilferty style
/// initial guess; converges to ~1e-13 relative accuracy.
inline double inverse_regularized_gamma_p(double p, double a) {
    if (a <= 0.0) throw std::invalid_argument("inverse_regularized_gamma_p: a must be > 0");
    if (p < 0.0 || p >= 1.0)
        throw std::invalid_argument("inverse_regularized_gamma_p: p must lie in [0,1)");
    if (p == 0.0) return 0.0;

    const double gln = std::lgamma(a);
    const double a1 = a - 1.0;
    double x;
    double lna1 = 0.0, afac = 0.0;
    if (a > 1.0) {
        lna1 = std::log(a1);
        afac = std::exp(a1 * (lna1 - 1.0) - gln);
        const double pp = p < 0.5 ? p : 1.0 - p;
        const double t = std::sqrt(-2.0 * std::log(pp));
        double guess = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if (p < 0.5) guess = -guess;
        x = std::max(1e-3, a * std::pow(1.0 - 1.0 / (9.0 * a) - guess / (3.0 * std::sqrt(a)), 3));
    } else {
        const double t = 1.0 - a * (0.253 + a * 0.12);
        x = p < t ? std::pow(p / t, 1.0 / a) : 1.0 - std::log(1.0 - (p - t) / (1.0 - t));
    }

    for (int j = 0; j < 32; ++j) {
        if (x <= 0.0) return 0.0;
        const double err = regularized_gamma_p(a, x) - p;
        double t;
        if (a > 1.0)
            t = afac * std::exp(-(x - a1) + a1 * (std::log(x) - lna1));
        else
            t = std::exp(-x + a1 * std::log(x) - gln);
        const double u = err / t;
        const double step = u / (1.0 - 0.5 * std::min(1.0, u * (a1 / x - 1.0)));
        x -= step;
        if (x <= 0.0) x = 0.5 * (x + step);
        if (std::abs(step) < 1e-13 * x) break;
    }
    return x;
}

}  // namespace detail

/// Chi-square quantile with dof degrees of freedom, computed internally
/// from the inverse incomplete gamma; accurate to about 1e-10.
inline double chi_square_quantile(double level, double dof) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("chi_square_quantile: level must lie in (0,1)");
    if (!(dof > 0.0)) throw std::invalid_argument("chi_square_quantile: dof must be > 0");
    return 2.0 * detail::inverse_regularized_gamma_p(level, dof / 2.0);
}

struct ConfidenceInterval {
    std::size_t parameter_index = 0;
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
    std::string method;
};

namespace detail {

inline std::vector<double> replicate_column(const BootstrapResult& replicates, std::size_t index) {
    if (index >= static_cast<std::size_t>(replicates.replicates.cols()))
        throw std::invalid_argument("replicate_column: parameter index out of range");
    if (replicates.replicates.rows() < 20)
        throw std::invalid_argument("interval: need at least 20 usable replicates");
    const auto col = replicates.replicates.col(static_cast<Eigen::Index>(index));
    return std::vector<double>(col.data(), col.data() + col.size());
}

}  // namespace detail

/**
 * Percentile bootstrap interval: the empirical ((1-level)/2, (1+level)/2)
 * quantiles of a replicate column, with the interpolated quantile
 * definition.
 */
inline ConfidenceInterval percentile_interval(const BootstrapResult& replicates, std::size_t index,
                                              double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("percentile_interval: level must lie in (0,1)");
    const std::vector<double> column = detail::replicate_column(replicates, index);
    ConfidenceInterval ci;
    ci.parameter_index = index;
    ci.level = level;
    ci.method = "percentile";
    ci.lower = quantile_interpolated(column, (1.0 - level) / 2.0);
    ci.upper = quantile_interpolated(column, (1.0 + level) / 2.0);
    return ci;
}

/**
 * Basic (reflected) bootstrap interval around the base estimate,
 * available as a sensitivity alternative to the percentile construction.
 */
inline ConfidenceInterval basic_interval(const BootstrapResult& replicates, std::size_t index,
                                         double level) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("basic_interval: level must lie in (0,1)");
    const std::vector<double> column = detail::replicate_column(replicates, index);
    const double center = replicates.base_fit.theta_hat.to_vector()[static_cast<Eigen::Index>(index)];
    ConfidenceInterval ci;
    ci.parameter_index = index;
    ci.level = level;
    ci.method = "basic";
    const double q_lo = quantile_interpolated(column, (1.0 - level) / 2.0);
    const double q_hi = quantile_interpolated(column, (1.0 + level) / 2.0);
    ci.lower = 2.0 * center - q_hi;
    ci.upper = 2.0 * center - q_lo;
    return ci;
}

/**
 * Ellipsoidal confidence set from the limiting normal law:
 *   { theta : (theta - center)^T shape^{-1} (theta - center) <= threshold },
 * where shape is the covariance of theta^ itself (asymptotic covariance
 * divided by n) and threshold the chi-square quantile with dim degrees of
 * freedom. The boundary belongs to the set.
 */
struct ConfidenceEllipse {
    Eigen::VectorXd center;
    Eigen::MatrixXd shape;
    double level = 0.0;
    double threshold = 0.0;
};

inline ConfidenceEllipse confidence_ellipse(const Eigen::VectorXd& theta_hat,
                                            const Eigen::MatrixXd& cov, std::size_t n,
                                            double level) {
    if (cov.rows() != cov.cols() || cov.rows() != theta_hat.size())
        throw std::invalid_argument("confidence_ellipse: dimension mismatch");
    if (n == 0) throw std::invalid_argument("confidence_ellipse: n must be positive");
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("confidence_ellipse: covariance must be positive-definite");
    ConfidenceEllipse e;
    e.center = theta_hat;
    e.shape = cov / static_cast<double>(n);
    e.level = level;
    e.threshold = chi_square_quantile(level, static_cast<double>(theta_hat.size()));
    return e;
}

inline bool ellipse_contains(const ConfidenceEllipse& e, const Eigen::VectorXd& theta0) {
    if (theta0.size() != e.center.size())
        throw std::invalid_argument("ellipse_contains: dimension mismatch");
    const Eigen::VectorXd diff = theta0 - e.center;
    const Eigen::LLT<Eigen::MatrixXd> llt(e.shape);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("ellipse_contains: shape must be positive-definite");
    const double quad_form = diff.dot(llt.solve(diff));
    return quad_form <= e.threshold;
}

/// Sum of absolute errors |theta^_i - theta0_i| over all components.
inline double sae(const Eigen::VectorXd& theta_hat, const Eigen::VectorXd& theta0) {
    if (theta_hat.size() != theta0.size())
        throw std::invalid_argument("sae: dimension mismatch");
    return (theta_hat - theta0).lpNorm<1>();
}

/// Interval-coverage bookkeeping; exactly one of below/inside/above holds.
struct CoverageRecord {
    std::size_t parameter_index = 0;
    bool below = false;
    bool inside = false;
    bool above = false;

    static CoverageRecord for_interval(const ConfidenceInterval& ci, double truth) {
        CoverageRecord rec;
        rec.parameter_index = ci.parameter_index;
        rec.below = truth < ci.lower;
        rec.above = truth > ci.upper;
        rec.inside = !rec.below && !rec.above;
        return rec;
    }
};

}  // namespace garchboot
