#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "garchboot/inference.hpp"
#include "garchboot/rng.hpp"

using namespace garchboot;
using Catch::Approx;

namespace {

BootstrapResult result_with_column(const std::vector<double>& column) {
    BootstrapResult r;
    r.replicates.resize(static_cast<Eigen::Index>(column.size()), 1);
    for (std::size_t i = 0; i < column.size(); ++i)
        r.replicates(static_cast<Eigen::Index>(i), 0) = column[i];
    return r;
}

}  // namespace

TEST_CASE("chi-square quantiles hit tabled values", "[inference]") {
    REQUIRE(chi_square_quantile(0.95, 2) == Approx(5.991464547107979).margin(1e-9));
    REQUIRE(chi_square_quantile(0.99, 2) == Approx(9.210340371976184).margin(1e-9));
    REQUIRE(chi_square_quantile(0.975, 1) == Approx(5.023886187314888).margin(1e-9));
    REQUIRE(chi_square_quantile(0.95, 3) == Approx(7.814727903251179).margin(1e-9));
    REQUIRE(chi_square_quantile(0.99, 5) == Approx(15.086272469388989).margin(1e-9));
    REQUIRE(chi_square_quantile(0.5, 2) == Approx(1.386294361119891).margin(1e-10));
    REQUIRE(chi_square_quantile(0.999, 10) == Approx(29.588298445074422).margin(1e-8));
    REQUIRE(chi_square_quantile(0.05, 1) == Approx(0.003932140000020).margin(1e-12));
    // 2 degrees of freedom has the closed form -2 log(1 - p)
    for (double p : {0.1, 0.5, 0.9, 0.95, 0.99, 0.999})
        REQUIRE(chi_square_quantile(p, 2) == Approx(-2.0 * std::log1p(-p)).margin(1e-10));
    REQUIRE_THROWS_AS(chi_square_quantile(0.0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(chi_square_quantile(1.0, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(chi_square_quantile(0.95, 0.0), std::invalid_argument);
}

TEST_CASE("percentile interval uses the interpolated quantile", "[inference]") {
    std::vector<double> column(100);
    for (int i = 0; i < 100; ++i) column[i] = i + 1.0;
    const auto r = result_with_column(column);
    const ConfidenceInterval ci = percentile_interval(r, 0, 0.90);
    REQUIRE(ci.lower == Approx(5.95));
    REQUIRE(ci.upper == Approx(95.05));
    REQUIRE(ci.method == "percentile");
    REQUIRE(ci.level == 0.90);

    const auto degenerate = result_with_column(std::vector<double>(30, 4.2));
    const ConfidenceInterval flat = percentile_interval(degenerate, 0, 0.95);
    REQUIRE(flat.lower == 4.2);
    REQUIRE(flat.upper == 4.2);

    REQUIRE_THROWS_AS(percentile_interval(result_with_column({1, 2, 3}), 0, 0.95),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(percentile_interval(r, 3, 0.95), std::invalid_argument);
}

TEST_CASE("intervals nest with the level", "[inference]") {
    Rng rng(77);
    std::vector<double> column(200);
    for (auto& v : column) v = rng.normal();
    const auto r = result_with_column(column);
    const ConfidenceInterval narrow = percentile_interval(r, 0, 0.95);
    const ConfidenceInterval wide = percentile_interval(r, 0, 0.99);
    REQUIRE(wide.lower <= narrow.lower);
    REQUIRE(wide.upper >= narrow.upper);
}

TEST_CASE("basic interval reflects around the base estimate", "[inference]") {
    std::vector<double> column(100);
    for (int i = 0; i < 100; ++i) column[i] = i + 1.0;
    auto r = result_with_column(column);
    r.base_fit.theta_hat = GarchSpec(50.0, {}, {});
    const ConfidenceInterval basic = basic_interval(r, 0, 0.90);
    REQUIRE(basic.lower == Approx(2.0 * 50.0 - 95.05));
    REQUIRE(basic.upper == Approx(2.0 * 50.0 - 5.95));
    REQUIRE(basic.method == "basic");
}

TEST_CASE("confidence ellipse geometry", "[inference]") {
    const Eigen::VectorXd center = Eigen::VectorXd::Zero(2);
    const Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);
    const ConfidenceEllipse e = confidence_ellipse(center, cov, 1, 0.95);
    REQUIRE(e.threshold == Approx(5.991464547107979).margin(1e-9));

    REQUIRE(ellipse_contains(e, center));
    const double radius = std::sqrt(e.threshold);
    Eigen::VectorXd point(2);
    point << radius - 1e-9, 0.0;
    REQUIRE(ellipse_contains(e, point));
    point << radius, 0.0;  // boundary belongs to the closed set
    REQUIRE(ellipse_contains(e, point));
    point << std::sqrt(10.0 * e.threshold), 0.0;
    REQUIRE_FALSE(ellipse_contains(e, point));

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
    REQUIRE_THROWS_AS(confidence_ellipse(center, bad, 1, 0.95), std::invalid_argument);
}

TEST_CASE("ellipses nest with the level", "[inference]") {
    Eigen::VectorXd center(2);
    center << 1.0, 0.5;
    Eigen::MatrixXd cov(2, 2);
    cov << 4.893, -2.148, -2.148, 3.926;
    const ConfidenceEllipse e95 = confidence_ellipse(center, cov, 1000, 0.95);
    const ConfidenceEllipse e99 = confidence_ellipse(center, cov, 1000, 0.99);
    REQUIRE(e99.threshold > e95.threshold);

    Rng rng(31);
    for (int i = 0; i < 500; ++i) {
        Eigen::VectorXd point(2);
        point << center[0] + 0.3 * rng.normal(), center[1] + 0.3 * rng.normal();
        if (ellipse_contains(e95, point)) REQUIRE(ellipse_contains(e99, point));
    }
}

TEST_CASE("ellipse membership is invariant under affine reparameterization", "[inference]") {
    Rng rng(92);
    for (int rep = 0; rep < 50; ++rep) {
        Eigen::VectorXd center(2);
        center << rng.normal(), rng.normal();
        Eigen::MatrixXd half(2, 2);
        half << 1.0 + rng.uniform(), 0.3 * rng.normal(), 0.3 * rng.normal(), 1.0 + rng.uniform();
        const Eigen::MatrixXd cov = half * half.transpose();

        Eigen::MatrixXd m(2, 2);
        do {
            m << rng.normal(), rng.normal(), rng.normal(), rng.normal();
        } while (std::abs(m.determinant()) < 0.3);

        const ConfidenceEllipse e = confidence_ellipse(center, cov, 50, 0.95);
        const ConfidenceEllipse te =
            confidence_ellipse(m * center, m * cov * m.transpose(), 50, 0.95);

        for (int k = 0; k < 20; ++k) {
            Eigen::VectorXd point(2);
            point << center[0] + rng.normal(), center[1] + rng.normal();
            // skip points too close to the boundary for a robust comparison
            const Eigen::VectorXd diff = point - e.center;
            const double qf = diff.dot(e.shape.llt().solve(diff));
            if (std::abs(qf - e.threshold) < 1e-6 * e.threshold) continue;
            REQUIRE(ellipse_contains(e, point) == ellipse_contains(te, m * point));
        }
    }
}

TEST_CASE("sae is the componentwise L1 distance", "[inference]") {
    Eigen::VectorXd a(2), b(2);
    a << 1.0, 0.5;
    REQUIRE(sae(a, a) == 0.0);
    b << 1.2, 0.4;
    REQUIRE(sae(b, a) == Approx(0.3));
    Eigen::VectorXd c(3);
    REQUIRE_THROWS_AS(sae(a, c), std::invalid_argument);
}

TEST_CASE("coverage records classify exactly one way", "[inference]") {
    ConfidenceInterval ci;
    ci.parameter_index = 1;
    ci.lower = 0.4;
    ci.upper = 0.6;
    for (double truth : {0.1, 0.4, 0.5, 0.6, 0.9}) {
        const CoverageRecord rec = CoverageRecord::for_interval(ci, truth);
        REQUIRE(static_cast<int>(rec.below) + static_cast<int>(rec.inside) +
                    static_cast<int>(rec.above) ==
                1);
    }
    REQUIRE(CoverageRecord::for_interval(ci, 0.1).below);
    REQUIRE(CoverageRecord::for_interval(ci, 0.4).inside);  // closed endpoints
    REQUIRE(CoverageRecord::for_interval(ci, 0.6).inside);
    REQUIRE(CoverageRecord::for_interval(ci, 0.9).above);
}
