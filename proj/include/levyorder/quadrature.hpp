#ifndef LEVYORDER_QUADRATURE_HPP
#define LEVYORDER_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace levyorder {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [a, b].
/// Nodes via Newton iteration on P_n starting from the Chebyshev guess.
inline QuadRule gauss_legendre(int n, double a, double b) {
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (b + a);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        double w = 2.0 * half / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

/// Composite rule: `panels` panels of an order-`order` Gauss-Legendre rule on [a, b].
inline QuadRule composite_gauss_legendre(int order, int panels, double a, double b) {
    QuadRule rule;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        QuadRule panel = gauss_legendre(order, a + p * h, a + (p + 1) * h);
        rule.nodes.insert(rule.nodes.end(), panel.nodes.begin(), panel.nodes.end());
        rule.weights.insert(rule.weights.end(), panel.weights.begin(), panel.weights.end());
    }
    return rule;
}

}  // namespace levyorder

#endif
