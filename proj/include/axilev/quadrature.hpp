#pragma once
// One-dimensional quadrature building blocks.
//
// Gauss-Legendre nodes and weights are generated at startup by Newton
// iteration on the Legendre recurrence (deterministic, machine precision)
// rather than hardcoded tables.  Two rules of different order evaluated on
// the same panel give an embedded error estimate; the adaptive driver
// bisects the worst panel until the global estimate meets the tolerance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace axilev::quadrature {

struct GaussRule {
    std::vector<double> nodes;    // in (-1, 1)
    std::vector<double> weights;  // sum to 2
};

inline GaussRule make_gauss_legendre(int n) {
    if (n < 2) throw std::invalid_argument("gauss rule order must be >= 2");
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n(x) = 0
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // one clean-up Newton step after convergence
        {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.weights[i] = w;
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

inline const GaussRule& gauss10() {
    static const GaussRule r = make_gauss_legendre(10);
    return r;
}

inline const GaussRule& gauss21() {
    static const GaussRule r = make_gauss_legendre(21);
    return r;
}

inline const GaussRule& gauss24() {
    static const GaussRule r = make_gauss_legendre(24);
    return r;
}

template <typename F>
inline double apply_rule(const GaussRule& r, F&& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double hw = 0.5 * (hi - lo);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        acc += r.weights[i] * f(mid + hw * r.nodes[i]);
    return acc * hw;
}

struct AdaptiveResult {
    double value;
    double error_estimate;
    int panels;
};

// Globally adaptive bisection driven by the |G21 - G10| panel estimate.
// `breakpoints` seeds the initial panels (strictly increasing).
template <typename F>
inline AdaptiveResult integrate_adaptive(F&& f, const std::vector<double>& breakpoints,
                                         double rel_tol, int max_panels = 20000) {
    if (breakpoints.size() < 2) throw std::invalid_argument("need at least one panel");
    struct Panel {
        double lo, hi, value, err;
    };
    auto eval = [&](double lo, double hi) -> Panel {
        const double coarse = apply_rule(gauss10(), f, lo, hi);
        const double fine = apply_rule(gauss21(), f, lo, hi);
        return {lo, hi, fine, std::abs(fine - coarse)};
    };

    std::vector<Panel> panels;
    panels.reserve(static_cast<std::size_t>(max_panels));
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i] < breakpoints[i + 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
        panels.push_back(eval(breakpoints[i], breakpoints[i + 1]));
    }

    auto totals = [&panels]() {
        // deterministic summation order: by panel position
        std::vector<std::size_t> idx(panels.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&panels](std::size_t a, std::size_t b) { return panels[a].lo < panels[b].lo; });
        double v = 0.0, e = 0.0;
        for (std::size_t i : idx) {
            v += panels[i].value;
            e += panels[i].err;
        }
        return std::pair<double, double>(v, e);
    };

    const double tiny = std::numeric_limits<double>::min() * 1e4;
    while (true) {
        auto [value, err] = totals();
        if (err <= rel_tol * std::abs(value) + tiny)
            return {value, err, static_cast<int>(panels.size())};
        if (static_cast<int>(panels.size()) >= max_panels) {
            throw std::runtime_error("adaptive quadrature: tolerance not reached within panel budget"
                                     "; achieved relative error estimate " +
                                     std::to_string(err / std::max(std::abs(value), tiny)));
        }
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err) worst = i;
        const Panel p = panels[worst];
        const double mid = 0.5 * (p.lo + p.hi);
        if (!(p.lo < mid && mid < p.hi)) {
            // panel no longer splittable; accept its estimate as converged
            panels[worst].err = 0.0;
            continue;
        }
        panels[worst] = eval(p.lo, mid);
        panels.push_back(eval(mid, p.hi));
    }
}

// Fixed composite rule: order-24 Gauss-Legendre on uniform panels.
template <typename F>
inline double integrate_fixed(F&& f, double lo, double hi, double max_panel_width) {
    if (!(hi > lo)) throw std::invalid_argument("empty integration interval");
    const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel_width)));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = lo + (hi - lo) * (static_cast<double>(i) / n);
        const double b = lo + (hi - lo) * (static_cast<double>(i + 1) / n);
        acc += apply_rule(gauss24(), f, a, b);
    }
    return acc;
}

}  // namespace axilev::quadrature
