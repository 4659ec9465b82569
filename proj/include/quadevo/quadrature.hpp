#pragma once

#include <vector>

namespace quadevo {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }
};

// Gauss-Legendre rule of the given order on [-1, 1].
QuadratureRule gauss_legendre(int order);

// Composite Gauss-Legendre on [a, b] with equal panels.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order);

template <class Fn>
auto integrate(const QuadratureRule& rule, Fn&& fn) {
    using R = decltype(fn(0.0));
    R acc{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * fn(rule.nodes[i]);
    }
    return acc;
}

}  // namespace quadevo
