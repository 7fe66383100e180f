#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace garchboot {

struct NelderMeadOptions {
    std::size_t max_iterations = 2000;
    double tol_objective = 1e-10;  // spread f(worst) - f(best) across the simplex
    double tol_simplex = 1e-8;     // max infinity-norm distance of vertices to the best
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/**
 * Derivative-free simplex minimization with box constraints handled by
 * projection: every trial point is clamped into [lower, upper] before
 * evaluation. Standard reflection/expansion/contraction/shrink
 * coefficients (1, 2, 0.5, 0.5). The initial simplex perturbs each
 * coordinate by 5% of its value (0.00025 when the coordinate is zero),
 * flipping direction when the step would leave the box.
 */
inline NelderMeadResult nelder_mead_box(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& start,
                                        const Eigen::VectorXd& lower,
                                        const Eigen::VectorXd& upper,
                                        const NelderMeadOptions& opt = {}) {
    const Eigen::Index d = start.size();
    if (lower.size() != d || upper.size() != d)
        throw std::invalid_argument("nelder_mead_box: bound dimension mismatch");

    const auto clamp = [&](Eigen::VectorXd v) {
        for (Eigen::Index i = 0; i < d; ++i) v[i] = std::clamp(v[i], lower[i], upper[i]);
        return v;
    };

    std::vector<Eigen::VectorXd> vertex;
    vertex.reserve(static_cast<std::size_t>(d) + 1);
    vertex.push_back(clamp(start));
    for (Eigen::Index i = 0; i < d; ++i) {
        Eigen::VectorXd v = vertex[0];
        double step = v[i] != 0.0 ? 0.05 * std::abs(v[i]) : 0.00025;
        if (v[i] + step > upper[i]) step = -step;
        v[i] += step;
        vertex.push_back(clamp(v));
    }

    std::vector<double> value(vertex.size());
    for (std::size_t i = 0; i < vertex.size(); ++i) value[i] = f(vertex[i]);

    std::vector<std::size_t> order(vertex.size());
    const auto sort_order = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    };

    NelderMeadResult result;
    for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
        sort_order();
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[order.size() - 2];

        double diameter = 0.0;
        for (std::size_t i = 0; i < vertex.size(); ++i)
            diameter = std::max(diameter, (vertex[i] - vertex[best]).lpNorm<Eigen::Infinity>());
        if (value[worst] - value[best] <= opt.tol_objective && diameter <= opt.tol_simplex) {
            result.x = vertex[best];
            result.value = value[best];
            result.iterations = iter;
            result.converged = true;
            return result;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (std::size_t i = 0; i < vertex.size(); ++i)
            if (i != worst) centroid += vertex[i];
        centroid /= static_cast<double>(vertex.size() - 1);

        const Eigen::VectorXd reflected = clamp(centroid + (centroid - vertex[worst]));
        const double f_reflected = f(reflected);

        if (f_reflected < value[best]) {
            const Eigen::VectorXd expanded = clamp(centroid + 2.0 * (centroid - vertex[worst]));
            const double f_expanded = f(expanded);
            if (f_expanded < f_reflected) {
                vertex[worst] = expanded;
                value[worst] = f_expanded;
            } else {
                vertex[worst] = reflected;
                value[worst] = f_reflected;
            }
        } else if (f_reflected < value[second_worst]) {
            vertex[worst] = reflected;
            value[worst] = f_reflected;
        } else {
            const bool outside = f_reflected < value[worst];
            const Eigen::VectorXd anchor = outside ? reflected : vertex[worst];
            const Eigen::VectorXd contracted = clamp(centroid + 0.5 * (anchor - centroid));
            const double f_contracted = f(contracted);
            if (f_contracted < (outside ? f_reflected : value[worst])) {
                vertex[worst] = contracted;
                value[worst] = f_contracted;
            } else {
                for (std::size_t i = 0; i < vertex.size(); ++i) {
                    if (i == best) continue;
                    vertex[i] = clamp(vertex[best] + 0.5 * (vertex[i] - vertex[best]));
                    value[i] = f(vertex[i]);
                }
            }
        }
        result.iterations = iter + 1;
    }

    sort_order();
    result.x = vertex[order.front()];
    result.value = value[order.front()];
    result.converged = false;
    return result;
}

}  // namespace garchboot
