#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "garchboot/rng.hpp"

namespace garchboot {

/**
 * GARCH(p,q) parameter vector theta = (omega, alpha_1..alpha_q, beta_1..beta_p).
 *
 * The parameter space requires omega > 0 and nonnegative coefficients.
 * q = p = 0 is allowed as the constant-variance reduction (the path is then
 * the innovation stream scaled by sqrt(omega)).
 */
struct GarchSpec {
    double omega = 1.0;
    std::vector<double> alpha;  // ARCH coefficients, size q
    std::vector<double> beta;   // GARCH coefficients, size p

    GarchSpec() = default;
    GarchSpec(double omega_, std::vector<double> alpha_, std::vector<double> beta_ = {})
        : omega(omega_), alpha(std::move(alpha_)), beta(std::move(beta_)) {
        validate();
    }

    void validate() const {
        if (!(omega > 0.0)) throw std::invalid_argument("GarchSpec: omega must be > 0");
        for (double a : alpha)
            if (a < 0.0) throw std::invalid_argument("GarchSpec: alpha coefficients must be >= 0");
        for (double b : beta)
            if (b < 0.0) throw std::invalid_argument("GarchSpec: beta coefficients must be >= 0");
    }

    [[nodiscard]] std::size_t q() const noexcept { return alpha.size(); }
    [[nodiscard]] std::size_t p() const noexcept { return beta.size(); }
    [[nodiscard]] std::size_t dim() const noexcept { return 1 + alpha.size() + beta.size(); }

    [[nodiscard]] double coefficient_sum() const noexcept {
        return std::accumulate(alpha.begin(), alpha.end(), 0.0) +
               std::accumulate(beta.begin(), beta.end(), 0.0);
    }

    [[nodiscard]] Eigen::VectorXd to_vector() const {
        Eigen::VectorXd v(dim());
        v[0] = omega;
        for (std::size_t i = 0; i < alpha.size(); ++i) v[1 + i] = alpha[i];
        for (std::size_t j = 0; j < beta.size(); ++j) v[1 + alpha.size() + j] = beta[j];
        return v;
    }

    static GarchSpec from_vector(std::size_t q, std::size_t p, const Eigen::VectorXd& v) {
        if (static_cast<std::size_t>(v.size()) != 1 + q + p)
            throw std::invalid_argument("GarchSpec::from_vector: dimension mismatch");
        GarchSpec s;
        s.omega = v[0];
        s.alpha.assign(v.data() + 1, v.data() + 1 + q);
        s.beta.assign(v.data() + 1 + q, v.data() + 1 + q + p);
        s.validate();
        return s;
    }

    [[nodiscard]] std::vector<std::string> parameter_names() const {
        std::vector<std::string> names{"omega"};
        for (std::size_t i = 0; i < alpha.size(); ++i) names.push_back("alpha" + std::to_string(i + 1));
        for (std::size_t j = 0; j < beta.size(); ++j) names.push_back("beta" + std::to_string(j + 1));
        return names;
    }
};

/// True iff sum(alpha) + sum(beta) < 1 (strict), the finite-variance condition.
inline bool is_second_order_stationary(const GarchSpec& spec) {
    spec.validate();
    return spec.coefficient_sum() < 1.0;
}

/// omega / (1 - sum) when second-order stationary, otherwise omega.
inline double stationary_variance_or_omega(const GarchSpec& spec) {
    const double s = spec.coefficient_sum();
    return s < 1.0 ? spec.omega / (1.0 - s) : spec.omega;
}

/**
 * Innovation law of the driving noise: mean 0, variance 1.
 * The Student-t variant is scaled by sqrt((df-2)/df) so its variance is 1.
 */
class InnovationDistribution {
public:
    static InnovationDistribution gaussian() { return InnovationDistribution(0.0); }

    static InnovationDistribution student_t(double df) {
        if (!(df > 2.0))
            throw std::invalid_argument("InnovationDistribution: Student-t needs df > 2");
        return InnovationDistribution(df);
    }

    [[nodiscard]] bool is_gaussian() const noexcept { return df_ == 0.0; }
    [[nodiscard]] double df() const noexcept { return df_; }

    /// Fourth moment: 3 for Gaussian, 3(df-2)/(df-4) for t with df > 4,
    /// +infinity for df <= 4.
    [[nodiscard]] double kurtosis() const noexcept {
        if (is_gaussian()) return 3.0;
        if (df_ > 4.0) return 3.0 * (df_ - 2.0) / (df_ - 4.0);
        return std::numeric_limits<double>::infinity();
    }

    double sample(Rng& rng) const {
        if (is_gaussian()) return rng.normal();
        return rng.student_t(df_) * std::sqrt((df_ - 2.0) / df_);
    }

    [[nodiscard]] std::string label() const {
        if (is_gaussian()) return "gaussian";
        std::ostringstream os;
        os << "t" << df_;
        return os.str();
    }

    /// Parses "gaussian" or "t<df>", e.g. "t5".
    static InnovationDistribution parse(const std::string& text) {
        if (text == "gaussian" || text == "normal") return gaussian();
        if (!text.empty() && text[0] == 't') {
            try {
                return student_t(std::stod(text.substr(1)));
            } catch (const std::invalid_argument&) {
            }
        }
        throw std::invalid_argument("unknown innovation distribution: '" + text + "'");
    }

private:
    explicit InnovationDistribution(double df) : df_(df) {}
    double df_;  // 0 encodes Gaussian
};

/**
 * Observed series x_1..x_n. When produced by simulate(), the generating
 * spec and the conditional variances are kept for diagnostics.
 */
struct SamplePath {
    std::vector<double> values;
    std::optional<GarchSpec> true_spec;
    std::optional<std::vector<double>> true_variances;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/**
 * Simulates n observations of the GARCH(p,q) recursion
 *   x_t = sqrt(h_t) eta_t,  h_t = omega + sum_i alpha_i x_{t-i}^2 + sum_j beta_j h_{t-j}
 * after discarding burn_in initial steps. Presample squared values and
 * variances start at the unconditional variance omega/(1-sum) when it
 * exists, at omega otherwise. Bit-reproducible given (seed, n, burn_in).
 */
inline SamplePath simulate(const GarchSpec& spec, const InnovationDistribution& dist,
                           std::size_t n, std::size_t burn_in, std::uint64_t seed) {
    spec.validate();
    if (n == 0) throw std::invalid_argument("simulate: n must be positive");

    const std::size_t q = spec.q();
    const std::size_t p = spec.p();
    const double h0 = stationary_variance_or_omega(spec);

    std::vector<double> xsq_lag(q, h0);   // x_{t-1}^2 .. x_{t-q}^2, newest first
    std::vector<double> h_lag(p, h0);     // h_{t-1} .. h_{t-p}, newest first

    Rng rng(seed);
    SamplePath path;
    path.values.reserve(n);
    std::vector<double> variances;
    variances.reserve(n);

    const std::size_t total = burn_in + n;
    for (std::size_t t = 0; t < total; ++t) {
        double h = spec.omega;
        for (std::size_t i = 0; i < q; ++i) h += spec.alpha[i] * xsq_lag[i];
        for (std::size_t j = 0; j < p; ++j) h += spec.beta[j] * h_lag[j];

        const double x = std::sqrt(h) * dist.sample(rng);

        if (q > 0) {
            for (std::size_t i = q - 1; i > 0; --i) xsq_lag[i] = xsq_lag[i - 1];
            xsq_lag[0] = x * x;
        }
        if (p > 0) {
            for (std::size_t j = p - 1; j > 0; --j) h_lag[j] = h_lag[j - 1];
            h_lag[0] = h;
        }

        if (t >= burn_in) {
            path.values.push_back(x);
            variances.push_back(h);
        }
    }

    path.true_spec = spec;
    path.true_variances = std::move(variances);
    return path;
}

/**
 * The (q+p)x(q+p) random matrix A_t of the squared-process state recursion
 * z_t = b_t + A_t z_{t-1}, evaluated at a given eta_t^2. The state is
 * z_t = (x_t^2,..,x_{t-q+1}^2, sigma_t^2,..,sigma_{t-p+1}^2); the affine
 * shift b_t = (omega eta_t^2, 0,.., omega, 0,..) is never materialized here.
 */
inline Eigen::MatrixXd companion_matrix(const GarchSpec& spec, double eta_sq) {
    if (eta_sq < 0.0) throw std::invalid_argument("companion_matrix: eta_sq must be >= 0");
    spec.validate();
    const std::size_t q = spec.q();
    const std::size_t p = spec.p();
    const std::size_t d = q + p;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    if (d == 0) return a;

    for (std::size_t i = 0; i < q; ++i) a(0, i) = spec.alpha[i] * eta_sq;
    for (std::size_t j = 0; j < p; ++j) a(0, q + j) = spec.beta[j] * eta_sq;
    for (std::size_t i = 1; i < q; ++i) a(i, i - 1) = 1.0;
    if (p > 0) {
        for (std::size_t i = 0; i < q; ++i) a(q, i) = spec.alpha[i];
        for (std::size_t j = 0; j < p; ++j) a(q, q + j) = spec.beta[j];
        for (std::size_t j = 1; j < p; ++j) a(q + j, q + j - 1) = 1.0;
    }
    return a;
}

/**
 * Estimates the top Lyapunov exponent (1/t) log ||A_t ... A_1|| of the
 * companion-matrix product along one simulated innovation stream, using
 * the Frobenius norm and renormalizing every 10 steps to avoid
 * overflow/underflow. A spec whose coefficients are all zero collapses
 * the product to the zero matrix; -infinity is returned as the sentinel.
 */
inline double estimate_lyapunov(const GarchSpec& spec, const InnovationDistribution& dist,
                                std::size_t t_max, std::uint64_t seed) {
    spec.validate();
    if (t_max < 1000) throw std::invalid_argument("estimate_lyapunov: t_max must be >= 1000");

    const std::size_t d = spec.q() + spec.p();
    const bool degenerate = (d == 0) || (spec.coefficient_sum() == 0.0);
    if (degenerate) return -std::numeric_limits<double>::infinity();

    // Only the top row of A_t depends on eta_t^2; update it in place.
    Eigen::MatrixXd a = companion_matrix(spec, 1.0);
    Eigen::RowVectorXd coeffs(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < spec.q(); ++i) coeffs[static_cast<Eigen::Index>(i)] = spec.alpha[i];
    for (std::size_t j = 0; j < spec.p(); ++j)
        coeffs[static_cast<Eigen::Index>(spec.q() + j)] = spec.beta[j];

    Eigen::MatrixXd product = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd scratch(d, d);
    Rng rng(seed);
    double log_norm_sum = 0.0;

    for (std::size_t t = 1; t <= t_max; ++t) {
        const double eta = dist.sample(rng);
        a.row(0) = coeffs * (eta * eta);
        scratch.noalias() = a * product;
        product.swap(scratch);
        if (t % 10 == 0) {
            const double s = product.norm();
            if (s == 0.0) return -std::numeric_limits<double>::infinity();
            log_norm_sum += std::log(s);
            product /= s;
        }
    }
    const double tail = product.norm();
    if (tail == 0.0) return -std::numeric_limits<double>::infinity();
    log_norm_sum += std::log(tail);
    return log_norm_sum / static_cast<double>(t_max);
}

namespace detail {

/// Roots of c[0] + c[1] z + ... + c[d] z^d via the companion-matrix
/// eigenvalues. High-order zero coefficients are stripped first.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<double> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    if (coeffs.size() < 2) return {};
    const std::size_t d = coeffs.size() - 1;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 1; i < d; ++i) c(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < d; ++i) c(i, d - 1) = -coeffs[i] / coeffs[d];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(c, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(d);
    for (std::size_t i = 0; i < d; ++i) roots[i] = solver.eigenvalues()[static_cast<Eigen::Index>(i)];
    return roots;
}

}  // namespace detail

/**
 * Identifiability diagnostics for a candidate true parameter:
 * sum(beta) < 1, alpha_q + beta_p != 0, A(1) = sum(alpha) != 0, and (for
 * p > 0) no numerically common roots of A(z) = sum alpha_i z^i and
 * B(z) = 1 - sum beta_j z^j. The trivial root z = 0 of A is factored out
 * before comparison (B(0) = 1 can never match it).
 */
struct IdentifiabilityReport {
    bool beta_sum_below_one = false;
    bool last_coefficients_nonzero = false;
    bool alpha_poly_nonzero_at_one = false;
    bool no_common_roots = true;
    double min_root_distance = std::numeric_limits<double>::infinity();

    static constexpr double kRootTolerance = 1e-8;

    [[nodiscard]] bool all_ok() const noexcept {
        return beta_sum_below_one && last_coefficients_nonzero &&
               alpha_poly_nonzero_at_one && no_common_roots;
    }
};

inline IdentifiabilityReport check_identifiability(const GarchSpec& spec) {
    spec.validate();
    IdentifiabilityReport report;

    const double beta_sum = std::accumulate(spec.beta.begin(), spec.beta.end(), 0.0);
    report.beta_sum_below_one = beta_sum < 1.0;

    const double last_alpha = spec.q() > 0 ? spec.alpha.back() : 0.0;
    const double last_beta = spec.p() > 0 ? spec.beta.back() : 0.0;
    report.last_coefficients_nonzero = (last_alpha + last_beta) != 0.0;

    const double alpha_sum = std::accumulate(spec.alpha.begin(), spec.alpha.end(), 0.0);
    report.alpha_poly_nonzero_at_one = alpha_sum != 0.0;

    if (spec.p() > 0) {
        // A(z)/z has coefficients (alpha_1, ..., alpha_q); B has (1, -beta_1, ...).
        std::vector<double> a_deflated(spec.alpha.begin(), spec.alpha.end());
        std::vector<double> b_coeffs{1.0};
        for (double b : spec.beta) b_coeffs.push_back(-b);

        const auto a_roots = detail::polynomial_roots(std::move(a_deflated));
        const auto b_roots = detail::polynomial_roots(std::move(b_coeffs));
        for (const auto& ra : a_roots)
            for (const auto& rb : b_roots)
                report.min_root_distance = std::min(report.min_root_distance, std::abs(ra - rb));
        report.no_common_roots = report.min_root_distance >= IdentifiabilityReport::kRootTolerance;
    }
    return report;
}

}  // namespace garchboot
