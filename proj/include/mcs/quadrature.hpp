#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "mcs/errors.hpp"

namespace molcs::quad {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule by Newton iteration on P_n.
inline Rule compute_gauss_legendre(int n) {
    if (n < 1) throw Error("Gauss-Legendre order must be positive");
    Rule r{std::vector<double>(std::size_t(n)), std::vector<double>(std::size_t(n))};
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[std::size_t(i)] = -x;
        r.nodes[std::size_t(n - 1 - i)] = x;
        r.weights[std::size_t(i)] = w;
        r.weights[std::size_t(n - 1 - i)] = w;
    }
    return r;
}

inline const Rule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

// Nodes and weights mapped onto [a, b].
inline std::vector<std::pair<double, double>> mapped(int n, double a, double b) {
    const Rule& r = gauss_legendre(n);
    std::vector<std::pair<double, double>> out;
    out.reserve(r.nodes.size());
    const double h = 0.5 * (b - a), c = 0.5 * (b + a);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) out.emplace_back(c + h * r.nodes[i], h * r.weights[i]);
    return out;
}

template <class F>
auto integrate(F&& f, double a, double b, int n = 40) {
    using R = decltype(f(a));
    R s{};
    for (const auto& [x, w] : mapped(n, a, b)) s += w * f(x);
    return s;
}

template <class F>
auto integrate_panels(F&& f, double a, double b, int panels, int n = 40) {
    using R = decltype(f(a));
    R s{};
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) s += integrate(f, a + p * h, a + (p + 1) * h, n);
    return s;
}

// Integral over [0, inf) with geometrically growing panels [0,1], [1,2], [2,4], ...
// Throws when the last panels still contribute relative to the running total.
inline double integrate_half_line(const std::function<double(double)>& f, int n = 40, double rel_tol = 1e-15,
                                  int max_panels = 60) {
    double total = integrate(f, 0.0, 1.0, n);
    double a = 1.0;
    int quiet = 0;
    for (int p = 0; p < max_panels; ++p) {
        const double b = 2.0 * a;
        const double part = integrate_panels(f, a, b, 2, n);
        total += part;
        a = b;
        if (std::abs(part) <= rel_tol * std::abs(total)) {
            if (++quiet >= 3) return total;
        } else {
            quiet = 0;
        }
    }
    throw NonConvergence("radial integral did not settle on [0, inf)");
}

// Uniform trapezoid nodes on [0, period): exact for trigonometric polynomials of degree < n.
inline std::vector<double> periodic_nodes(int n, double period = 2.0 * std::numbers::pi) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[std::size_t(i)] = period * i / n;
    return t;
}

}  // namespace molcs::quad
