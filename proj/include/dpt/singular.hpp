#pragma once

// Homogeneous singular fields: the r^{-m} interpolation family between the
// identity and the rank-one radial tensor, general spherical measures
// lambda(e) e@e / r^{d-1} with optional ray atoms, a quadrature test for the
// distributional divergence at the origin, and the two-dimensional Minkowski
// solver for support functions. Integrals over these fields always factor
// into an analytic radial power integral times a spherical quadrature, so no
// grid node ever sits on the singularity.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "dpt/errors.hpp"
#include "dpt/geometry.hpp"
#include "dpt/quadrature.hpp"
#include "dpt/symmatrix.hpp"
#include "dpt/tensorfield.hpp"

namespace dpt {

// r^{-m} (m e@e + (d-1-m) I) at x != 0. Positive semidefinite for
// 0 <= m <= d-1, locally integrable below m = d-1, and rank-one at the top
// of that range.
inline SymMatrix tm_tensor(int d, double m, const double* x) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
    if (r2 <= 0.0) throw ConfigError("tm_tensor is undefined at the origin");
    SymMatrix t(d);
    for (int i = 0; i < d; ++i) {
        t.at(i, i) = d - 1.0 - m;
        for (int j = i; j < d; ++j) t.at(i, j) += m * x[i] * x[j] / r2;
    }
    t *= std::pow(std::sqrt(r2), -m);
    return t;
}

// Integral over the unit ball of (det T_m)^{1/(d-1)}: the integrand is
// homogeneous of degree -dm/(d-1), so the radial part is exact and only the
// spherical factor is quadrature. Independent of m for m < d-1.
inline double tm_det_mass(int d, double m, int sphere_res = 32) {
    double degree = -d * m / (d - 1.0);
    if (d + degree <= 0.0)
        throw ConfigError("tm determinant mass needs m < d-1");
    SphereRule rule = sphere_rule(d, sphere_res);
    double surface = 0.0;
    for (int q = 0; q < rule.size(); ++q)
        surface += rule.weights[static_cast<std::size_t>(q)] *
                   detroot(tm_tensor(d, m, rule.point(q)), 1.0 / (d - 1));
    return surface / (d + degree);
}

// Divergence obstruction for a homogeneous field r^{-m} S(e): the surface
// integral of (m+1-d) e.Se + Tr(S restricted to e-perp). A divergence-free
// field of this form must make it vanish; for m strictly between d-1 and d
// and S PSD not identically zero it is strictly positive, which is the
// barrier that caps the order of the singularity at d-1.
inline double barrier_defect(int d, double m,
                             const std::function<SymMatrix(const double*)>& s,
                             int sphere_res = 32) {
    SphereRule rule = sphere_rule(d, sphere_res);
    double total = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
        const double* e = rule.point(q);
        SymMatrix sm = s(e);
        if (sm.dim() != d) throw DimensionError("barrier_defect: S dimension mismatch");
        double ese = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) ese += e[i] * sm(i, j) * e[j];
        total += rule.weights[static_cast<std::size_t>(q)] *
                 ((m + 1.0 - d) * ese + (sm.trace() - ese));
    }
    return total;
}

// A non-negative measure on the unit sphere: a smooth density sampled on a
// quadrature rule plus point atoms. The induced tensor field is
// lambda(e) e@e / r^{d-1}, with each atom contributing a line measure along
// its ray.
class SphericalMeasure {
public:
    struct Atom {
        std::array<double, 3> dir{};
        double weight = 0.0;
    };

    static SphericalMeasure uniform(int d, int res = 32) {
        return from_density(d, res, [](const double*) { return 1.0; });
    }

    static SphericalMeasure from_density(int d, int res,
                                         std::function<double(const double*)> fn) {
        SphericalMeasure m;
        m.dim_ = d;
        m.rule_ = sphere_rule(d, res);
        m.density_fn_ = std::move(fn);
        m.density_.resize(static_cast<std::size_t>(m.rule_.size()));
        for (int q = 0; q < m.rule_.size(); ++q) {
            double v = m.density_fn_(m.rule_.point(q));
            if (v < 0.0) throw ConfigError("spherical density must be non-negative");
            m.density_[static_cast<std::size_t>(q)] = v;
        }
        return m;
    }

    static SphericalMeasure atoms_only(int d, const std::vector<Atom>& atoms) {
        SphericalMeasure m;
        m.dim_ = d;
        m.rule_ = sphere_rule(d, 8);
        m.density_fn_ = [](const double*) { return 0.0; };
        m.density_.assign(static_cast<std::size_t>(m.rule_.size()), 0.0);
        for (const Atom& a : atoms) m.add_atom(a.dir.data(), a.weight);
        return m;
    }

    void add_atom(const double* dir, double weight) {
        if (weight < 0.0) throw ConfigError("atom weights must be non-negative");
        double n = 0.0;
        for (int a = 0; a < dim_; ++a) n += dir[a] * dir[a];
        if (n <= 0.0) throw ConfigError("atom direction must be nonzero");
        Atom atom;
        atom.weight = weight;
        for (int a = 0; a < dim_; ++a) atom.dir[static_cast<std::size_t>(a)] = dir[a] / std::sqrt(n);
        atoms_.push_back(atom);
    }

    int dim() const { return dim_; }
    const SphereRule& rule() const { return rule_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double density_node(int q) const { return density_[static_cast<std::size_t>(q)]; }
    double density_at(const double* e) const { return density_fn_(e); }

    double total_mass() const {
        double t = 0.0;
        for (int q = 0; q < rule_.size(); ++q)
            t += rule_.weights[static_cast<std::size_t>(q)] * density_[static_cast<std::size_t>(q)];
        for (const Atom& a : atoms_) t += a.weight;
        return t;
    }

    // V = integral of e over the measure; zero exactly when the induced
    // field is divergence-free as a distribution.
    std::array<double, 3> mean_direction() const {
        std::array<double, 3> v{};
        for (int q = 0; q < rule_.size(); ++q) {
            const double* e = rule_.point(q);
            double w = rule_.weights[static_cast<std::size_t>(q)] *
                       density_[static_cast<std::size_t>(q)];
            for (int a = 0; a < dim_; ++a) v[static_cast<std::size_t>(a)] += w * e[a];
        }
        for (const Atom& a : atoms_)
            for (int i = 0; i < dim_; ++i) v[static_cast<std::size_t>(i)] += a.weight * a.dir[static_cast<std::size_t>(i)];
        return v;
    }

private:
    int dim_ = 0;
    SphereRule rule_;
    std::vector<double> density_;
    std::function<double(const double*)> density_fn_;
    std::vector<Atom> atoms_;
};

// Smooth part of the measure's tensor at a point off the origin.
inline SymMatrix spherical_tensor(const SphericalMeasure& m, const double* x) {
    const int d = m.dim();
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
    if (r2 <= 0.0) throw ConfigError("spherical_tensor is undefined at the origin");
    double r = std::sqrt(r2);
    double e[3];
    for (int a = 0; a < d; ++a) e[a] = x[a] / r;
    SymMatrix t(d);
    double lam = m.density_at(e);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) t.at(i, j) = lam * e[i] * e[j];
    t *= std::pow(r, 1.0 - d);
    return t;
}

// Sample the smooth part on a ball grid. The divergence-free flag reflects
// the distributional statement: it survives exactly when V vanishes.
inline TensorField spherical_field(const SphericalMeasure& m, const Geometry& g) {
    if (g.kind() != GeometryKind::ball || g.dim() != m.dim())
        throw ConfigError("spherical_field needs a matching ball geometry");
    TensorField f = sample_field(g, [&m](const double* x) { return spherical_tensor(m, x); },
                                 "spherical measure");
    f.flagged_dpt = true;
    std::array<double, 3> v = m.mean_direction();
    double vn = 0.0;
    for (int a = 0; a < m.dim(); ++a) vn += v[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(a)];
    f.flagged_divfree = std::sqrt(vn) <= 1e-10 * (1.0 + m.total_mass());
    return f;
}

// A smooth scalar test function with analytic gradient, supported in the
// unit ball.
struct TestFunction {
    std::function<double(const double*)> value;
    std::function<void(const double*, double*)> gradient;
};

// (1 - |x|^2)^3 inside the unit ball, zero outside: three continuous
// derivatives, polynomial under the radial quadrature.
inline TestFunction polynomial_bump(int d) {
    TestFunction t;
    t.value = [d](const double* x) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
        double s = 1.0 - r2;
        return s > 0.0 ? s * s * s : 0.0;
    };
    t.gradient = [d](const double* x, double* g) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
        double s = 1.0 - r2;
        double f = s > 0.0 ? -6.0 * s * s : 0.0;
        for (int a = 0; a < d; ++a) g[a] = f * x[a];
    };
    return t;
}

// Pairing of the row-wise divergence with a scalar test function: the vector
// v_i = -int T_ij d_j phi over the ball minus an epsilon core, Richardson
// extrapolated in epsilon. For these measures v must equal phi(0) V.
inline std::array<double, 3> distributional_divergence(const SphericalMeasure& m,
                                                       const TestFunction& phi,
                                                       double eps = 1e-3,
                                                       int radial_nodes = 48) {
    const int d = m.dim();
    auto pairing = [&](double cut) {
        std::array<double, 3> v{};
        Rule1D radial = gauss_legendre(radial_nodes, cut, 1.0);
        std::vector<double> ray(static_cast<std::size_t>(radial.size()));
        auto ray_integral = [&](const double* e) {
            double total = 0.0;
            double x[3], g[3];
            for (int k = 0; k < radial.size(); ++k) {
                double r = radial.nodes[static_cast<std::size_t>(k)];
                for (int a = 0; a < d; ++a) x[a] = r * e[a];
                phi.gradient(x, g);
                double radial_slope = 0.0;
                for (int a = 0; a < d; ++a) radial_slope += e[a] * g[a];
                total += radial.weights[static_cast<std::size_t>(k)] * radial_slope;
            }
            return total;
        };
        const SphereRule& rule = m.rule();
        for (int q = 0; q < rule.size(); ++q) {
            double lam = m.density_node(q);
            if (lam == 0.0) continue;
            const double* e = rule.point(q);
            double contrib = -rule.weights[static_cast<std::size_t>(q)] * lam * ray_integral(e);
            for (int a = 0; a < d; ++a) v[static_cast<std::size_t>(a)] += contrib * e[a];
        }
        for (const SphericalMeasure::Atom& atom : m.atoms()) {
            double contrib = -atom.weight * ray_integral(atom.dir.data());
            for (int a = 0; a < d; ++a)
                v[static_cast<std::size_t>(a)] += contrib * atom.dir[static_cast<std::size_t>(a)];
        }
        return v;
    };

    std::array<double, 3> v1 = pairing(eps), v2 = pairing(eps / 2), v3 = pairing(eps / 4);
    std::array<double, 3> r1{}, r2{};
    double drift = 0.0;
    for (int a = 0; a < d; ++a) {
        auto ia = static_cast<std::size_t>(a);
        r1[ia] = 2.0 * v2[ia] - v1[ia];
        r2[ia] = 2.0 * v3[ia] - v2[ia];
        drift = std::max(drift, std::fabs(r2[ia] - r1[ia]));
    }
    if (drift > 1e-6 * (1.0 + m.total_mass()))
        throw NumericError("core extrapolation did not settle: drift " + std::to_string(drift));
    return r2;
}

// Support function of a planar convex body as a truncated Fourier series.
// The curvature radius h'' + h is the datum of the two-dimensional Minkowski
// problem; modes +-1 are the translation gauge and are kept at zero.
class SupportFunction2D {
public:
    SupportFunction2D(std::vector<double> cos_coeff, std::vector<double> sin_coeff)
        : ca_(std::move(cos_coeff)), sb_(std::move(sin_coeff)) {
        if (sb_.size() != ca_.size()) sb_.resize(ca_.size(), 0.0);
    }

    int modes() const { return static_cast<int>(ca_.size()) - 1; }
    double cos_coeff(int k) const { return ca_[static_cast<std::size_t>(k)]; }
    double sin_coeff(int k) const { return sb_[static_cast<std::size_t>(k)]; }

    double value(double phi) const {
        double s = 0.0;
        for (std::size_t k = 0; k < ca_.size(); ++k)
            s += ca_[k] * std::cos(double(k) * phi) + sb_[k] * std::sin(double(k) * phi);
        return s;
    }

    // h'' + h: the curvature radius of the body at outward normal angle phi.
    double curvature_radius(double phi) const {
        double s = 0.0;
        for (std::size_t k = 0; k < ca_.size(); ++k) {
            double factor = 1.0 - double(k) * double(k);
            s += factor * (ca_[k] * std::cos(double(k) * phi) + sb_[k] * std::sin(double(k) * phi));
        }
        return s;
    }

    // Area of the body: (1/2) closed integral of h (h'' + h).
    double area() const {
        int n = std::max<int>(256, 4 * (modes() + 1));
        double total = 0.0;
        for (int j = 0; j < n; ++j) {
            double phi = 2.0 * pi * j / n;
            total += value(phi) * curvature_radius(phi);
        }
        return 0.5 * total * (2.0 * pi / n);
    }

private:
    std::vector<double> ca_, sb_;
};

// Solve h'' + h = lambda from equispaced samples of lambda on [0, 2 pi).
// Fourier mode k maps by 1/(1-k^2); modes +-1 lie in the kernel and must be
// absent from the datum (the closedness condition on the curvature measure),
// otherwise no convex body exists and the solver reports the obstruction.
inline SupportFunction2D support_solve_2d(const std::vector<double>& lambda_samples) {
    const int n = static_cast<int>(lambda_samples.size());
    if (n < 8) throw ConfigError("support_solve_2d needs at least 8 samples");
    double scale = 0.0;
    for (double v : lambda_samples) {
        if (v <= 0.0)
            throw NotConvexError("curvature radius must be strictly positive, got " +
                                 std::to_string(v));
        scale = std::max(scale, std::fabs(v));
    }
    const int kmax = n / 2 - 1;
    std::vector<double> ca(static_cast<std::size_t>(kmax) + 1, 0.0);
    std::vector<double> sb(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (int k = 0; k <= kmax; ++k) {
        double a = 0.0, b = 0.0;
        for (int j = 0; j < n; ++j) {
            double phi = 2.0 * pi * j / n;
            a += lambda_samples[static_cast<std::size_t>(j)] * std::cos(k * phi);
            b += lambda_samples[static_cast<std::size_t>(j)] * std::sin(k * phi);
        }
        double norm = (k == 0) ? 1.0 / n : 2.0 / n;
        ca[static_cast<std::size_t>(k)] = norm * a;
        sb[static_cast<std::size_t>(k)] = norm * b;
    }
    if (std::fabs(ca[1]) > 1e-10 * scale || std::fabs(sb[1]) > 1e-10 * scale)
        throw ObstructionError("curvature datum has nonzero first harmonic (" +
                               std::to_string(ca[1]) + ", " + std::to_string(sb[1]) +
                               "); no closed convex body exists");
    ca[1] = 0.0;
    sb[1] = 0.0;
    for (int k = 2; k <= kmax; ++k) {
        double factor = 1.0 / (1.0 - double(k) * double(k));
        ca[static_cast<std::size_t>(k)] *= factor;
        sb[static_cast<std::size_t>(k)] *= factor;
    }
    return SupportFunction2D(std::move(ca), std::move(sb));
}

// Weight of the determinant point mass carried by the homogeneous potential
// theta(x) = |x| h(x/|x|): the area of the convex body with support
// function h.
inline double singular_det_mass(const SupportFunction2D& h) { return h.area(); }

namespace detail {

// 6th-order central first and second derivative weights on stride-1 offsets.
inline double fd6_first(const std::function<double(double)>& f, double x, double eta) {
    return (f(x + eta) - f(x - eta)) * (3.0 / 4.0) / eta -
           (f(x + 2 * eta) - f(x - 2 * eta)) * (3.0 / 20.0) / eta +
           (f(x + 3 * eta) - f(x - 3 * eta)) * (1.0 / 60.0) / eta;
}

inline double fd6_second(const std::function<double(double)>& f, double x, double eta) {
    return ((f(x + 3 * eta) + f(x - 3 * eta)) * (1.0 / 90.0) -
            (f(x + 2 * eta) + f(x - 2 * eta)) * (3.0 / 20.0) +
            (f(x + eta) + f(x - eta)) * 1.5 - f(x) * (49.0 / 18.0)) /
           (eta * eta);
}

} // namespace detail

// Maximal deviation of cof(D^2 theta) from lambda(phi) e@e / r over a ring
// of sample points, where theta(x) = |x| h(x/|x|) and the Hessian comes from
// high-order finite differences of theta alone. This cross-checks the
// homogeneous-potential identity with no polar calculus in the loop.
inline double consistency_hat_hessian(const SupportFunction2D& h, int angle_count = 64,
                                      double eta = 5e-3) {
    auto theta = [&h](double x, double y) {
        double r = std::hypot(x, y);
        return r * h.value(std::atan2(y, x));
    };
    double worst = 0.0;
    for (int ir = 0; ir < 3; ++ir) {
        double r = 0.75 + 0.25 * ir;
        for (int j = 0; j < angle_count; ++j) {
            double phi = 2.0 * pi * j / angle_count;
            double x = r * std::cos(phi), y = r * std::sin(phi);
            SymMatrix hess(2);
            hess.at(0, 0) = detail::fd6_second([&](double t) { return theta(t, y); }, x, eta);
            hess.at(1, 1) = detail::fd6_second([&](double t) { return theta(x, t); }, y, eta);
            hess.at(0, 1) = detail::fd6_first(
                [&](double t) {
                    return detail::fd6_first([&](double s) { return theta(s, t); }, x, eta);
                },
                y, eta);
            SymMatrix hat = cofactor_matrix(hess);
            double lam_over_r = h.curvature_radius(phi) / r;
            double e0 = std::cos(phi), e1 = std::sin(phi);
            double dev = std::max({std::fabs(hat(0, 0) - lam_over_r * e0 * e0),
                                   std::fabs(hat(0, 1) - lam_over_r * e0 * e1),
                                   std::fabs(hat(1, 1) - lam_over_r * e1 * e1)});
            worst = std::max(worst, dev);
        }
    }
    return worst;
}

} // namespace dpt
