#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace garchboot {

inline double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean: empty input");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

/// Population variance (divisor n).
inline double variance_population(std::span<const double> x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size());
}

/// Mean of squares; the natural second moment for zero-mean series.
inline double mean_square(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean_square: empty input");
    double s = 0.0;
    for (double v : x) s += v * v;
    return s / static_cast<double>(x.size());
}

inline double median(std::vector<double> x) {
    if (x.empty()) throw std::invalid_argument("median: empty input");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return (n % 2 == 1) ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

/**
 * Quantile with linear interpolation between order statistics
 * (h = (n-1)p + 1 in 1-based indexing; the R "type 7" definition).
 * Fixed once so results are bit-reproducible.
 */
inline double quantile_interpolated(std::vector<double> x, double p) {
    if (x.empty()) throw std::invalid_argument("quantile: empty input");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0,1]");
    std::sort(x.begin(), x.end());
    const double h = static_cast<double>(x.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= x.size()) return x.back();
    const double w = h - static_cast<double>(lo);
    return x[lo] + w * (x[lo + 1] - x[lo]);
}

/// Sample covariance (divisor m-1) of the rows of a matrix.
inline Eigen::MatrixXd sample_covariance_rows(const Eigen::MatrixXd& rows) {
    const auto m = rows.rows();
    if (m < 2) throw std::invalid_argument("sample_covariance_rows: need at least 2 rows");
    const Eigen::RowVectorXd mu = rows.colwise().mean();
    const Eigen::MatrixXd centered = rows.rowwise() - mu;
    return (centered.transpose() * centered) / static_cast<double>(m - 1);
}

}  // namespace garchboot
