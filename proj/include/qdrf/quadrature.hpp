// quadrature.hpp — composite Gauss-Legendre and trapezoid helpers

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace qdrf::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Composite Gauss-Legendre rule (10 points per panel) on [a, b].
inline Rule composite_gauss_legendre(double a, double b, std::size_t panels) {
    using GL = boost::math::quadrature::gauss<double, 10>;
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();

    Rule rule;
    rule.nodes.reserve(panels * 10);
    rule.weights.reserve(panels * 10);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        const double half = 0.5 * h;
        for (std::size_t i = 0; i < x.size(); ++i) {
            // boost stores the non-negative half of a symmetric rule
            rule.nodes.push_back(mid + half * x[i]);
            rule.weights.push_back(half * w[i]);
            if (x[i] != 0.0) {
                rule.nodes.push_back(mid - half * x[i]);
                rule.weights.push_back(half * w[i]);
            }
        }
    }
    return rule;
}

/// Trapezoid sum over uniformly spaced samples.
template <typename T>
T trapezoid(std::span<const T> f, double h) {
    if (f.size() < 2) return T{};
    T acc = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) acc += f[i];
    return acc * h;
}

} // namespace qdrf::quad
