#pragma once

// One-dimensional quadrature rules and product rules on the unit spheres
// S^1, S^2, S^3. Node sets avoid poles and the origin by construction, so
// integrands with a singularity at r = 0 or at the sphere poles are never
// sampled there. Sphere surface areas come from the Gamma-function closed
// form, not hard-coded decimals.

#include <cmath>
#include <vector>

#include "dpt/errors.hpp"

namespace dpt {

inline constexpr double pi = 3.14159265358979323846264338327950288;

// |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2).
inline double sphere_area(int d) {
    if (d < 1) throw DimensionError("sphere_area needs d >= 1");
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

// Volume of the unit ball in R^d.
inline double ball_volume(int d) { return sphere_area(d) / d; }

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Legendre on [-1, 1]; exact for polynomials of degree 2n-1.
inline Rule1D gauss_legendre(int n) {
    if (n < 1) throw DimensionError("gauss_legendre needs n >= 1");
    Rule1D r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[static_cast<std::size_t>(i)] = -x;
        r.weights[static_cast<std::size_t>(i)] = w;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

// Gauss-Legendre mapped to [a, b].
inline Rule1D gauss_legendre(int n, double a, double b) {
    Rule1D r = gauss_legendre(n);
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        r.nodes[static_cast<std::size_t>(i)] = mid + hw * r.nodes[static_cast<std::size_t>(i)];
        r.weights[static_cast<std::size_t>(i)] *= hw;
    }
    return r;
}

// Gauss-Chebyshev (second kind): integrates f(u) sqrt(1-u^2) du on [-1, 1].
inline Rule1D gauss_chebyshev2(int n) {
    if (n < 1) throw DimensionError("gauss_chebyshev2 needs n >= 1");
    Rule1D r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        double t = pi * k / (n + 1.0);
        r.nodes[static_cast<std::size_t>(n - k)] = std::cos(t);
        r.weights[static_cast<std::size_t>(n - k)] = pi / (n + 1.0) * std::sin(t) * std::sin(t);
    }
    return r;
}

// Uniform periodic trapezoid rule on [0, period); spectrally accurate for
// smooth periodic integrands.
inline Rule1D trapezoid_periodic(int n, double period = 2.0 * pi) {
    if (n < 1) throw DimensionError("trapezoid_periodic needs n >= 1");
    Rule1D r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.assign(static_cast<std::size_t>(n), period / n);
    for (int j = 0; j < n; ++j) r.nodes[static_cast<std::size_t>(j)] = period * j / n;
    return r;
}

// Quadrature nodes on S^{d-1} (ambient dimension d in {2, 3, 4}), stored as
// flat coordinates with stride d. Weights sum to |S^{d-1}| exactly.
struct SphereRule {
    int dim = 0;
    std::vector<double> points; // size() == dim * weights.size()
    std::vector<double> weights;

    int size() const { return static_cast<int>(weights.size()); }
    const double* point(int i) const { return points.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim); }
};

// resolution is the polar node count; azimuthal counts are doubled so the
// rule resolves comparable angular frequencies in every direction.
inline SphereRule sphere_rule(int d, int resolution) {
    if (resolution < 8) resolution = 8;
    SphereRule s;
    s.dim = d;
    if (d == 2) {
        Rule1D phi = trapezoid_periodic(resolution);
        for (int j = 0; j < phi.size(); ++j) {
            s.points.push_back(std::cos(phi.nodes[static_cast<std::size_t>(j)]));
            s.points.push_back(std::sin(phi.nodes[static_cast<std::size_t>(j)]));
            s.weights.push_back(phi.weights[static_cast<std::size_t>(j)]);
        }
    } else if (d == 3) {
        Rule1D u = gauss_legendre(resolution);
        Rule1D phi = trapezoid_periodic(2 * resolution);
        for (int i = 0; i < u.size(); ++i) {
            double c = u.nodes[static_cast<std::size_t>(i)];
            double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (int j = 0; j < phi.size(); ++j) {
                s.points.push_back(sn * std::cos(phi.nodes[static_cast<std::size_t>(j)]));
                s.points.push_back(sn * std::sin(phi.nodes[static_cast<std::size_t>(j)]));
                s.points.push_back(c);
                s.weights.push_back(u.weights[static_cast<std::size_t>(i)] * phi.weights[static_cast<std::size_t>(j)]);
            }
        }
    } else if (d == 4) {
        Rule1D u1 = gauss_chebyshev2(resolution);
        Rule1D u2 = gauss_legendre(resolution);
        Rule1D phi = trapezoid_periodic(2 * resolution);
        for (int i = 0; i < u1.size(); ++i) {
            double c1 = u1.nodes[static_cast<std::size_t>(i)];
            double s1 = std::sqrt(std::max(0.0, 1.0 - c1 * c1));
            for (int j = 0; j < u2.size(); ++j) {
                double c2 = u2.nodes[static_cast<std::size_t>(j)];
                double s2 = std::sqrt(std::max(0.0, 1.0 - c2 * c2));
                for (int k = 0; k < phi.size(); ++k) {
                    s.points.push_back(c1);
                    s.points.push_back(s1 * c2);
                    s.points.push_back(s1 * s2 * std::cos(phi.nodes[static_cast<std::size_t>(k)]));
                    s.points.push_back(s1 * s2 * std::sin(phi.nodes[static_cast<std::size_t>(k)]));
                    s.weights.push_back(u1.weights[static_cast<std::size_t>(i)] * u2.weights[static_cast<std::size_t>(j)] *
                                        phi.weights[static_cast<std::size_t>(k)]);
                }
            }
        }
    } else {
        throw DimensionError("sphere_rule supports ambient dimension 2, 3, 4");
    }
    return s;
}

} // namespace dpt
