#pragma once

#include <functional>
#include <span>
#include <vector>
#include <type_traits>

namespace ribbonlab::quadrature {

// Gauss-Legendre nodes and weights on a closed interval.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

// n-point rule on [-1, 1]; exact for polynomials of degree 2n-1.
Rule gauss_legendre(int n);

// n-point rule mapped onto [a, b].
Rule gauss_legendre(int n, double a, double b);

// Thickness rule on [-1/2, 1/2] split at t = 0 (n points per half), so that
// profiles with a jump at mid-thickness are integrated panel-wise.
Rule split_thickness_rule(int n_per_half);

// Composite rule: `panels` equal panels of n points each on [a, b].
Rule composite(int n, int panels, double a, double b);

template <typename F>
auto integrate(const Rule &rule, F &&f) {
    using Value = std::decay_t<std::invoke_result_t<F &, double>>;
    Value acc = rule.weights[0] * f(rule.nodes[0]);
    for (std::size_t i = 1; i < rule.size(); ++i)
        acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

} // namespace ribbonlab::quadrature
