#include "quadevo/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <map>
#include <mutex>

#include "quadevo/errors.hpp"

namespace quadevo {

QuadratureRule gauss_legendre(int order) {
    if (order < 1) {
        throw InvalidArgument("Gauss-Legendre order must be positive");
    }
    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(order); it != cache.end()) {
        return it->second;
    }

    // Boost returns the non-negative zeros only.
    const auto zeros = boost::math::legendre_p_zeros<double>(order);
    QuadratureRule rule;
    for (double x : zeros) {
        const double dp = boost::math::legendre_p_prime<double>(order, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
        if (x != 0.0) {
            rule.nodes.push_back(-x);
            rule.weights.push_back(w);
        }
    }
    std::vector<std::size_t> idx(rule.nodes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return rule.nodes[a] < rule.nodes[b]; });
    QuadratureRule sorted;
    for (auto i : idx) {
        sorted.nodes.push_back(rule.nodes[i]);
        sorted.weights.push_back(rule.weights[i]);
    }
    cache.emplace(order, sorted);
    return sorted;
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order) {
    if (panels < 1) {
        throw InvalidArgument("composite rule needs at least one panel");
    }
    if (!(a < b)) {
        throw InvalidArgument("composite rule needs a < b");
    }
    const auto base = gauss_legendre(order);
    const double width = (b - a) / panels;
    QuadratureRule rule;
    rule.nodes.reserve(base.size() * static_cast<std::size_t>(panels));
    rule.weights.reserve(rule.nodes.capacity());
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width;
        for (std::size_t i = 0; i < base.size(); ++i) {
            rule.nodes.push_back(mid + 0.5 * width * base.nodes[i]);
            rule.weights.push_back(0.5 * width * base.weights[i]);
        }
    }
    return rule;
}

}  // namespace quadevo
