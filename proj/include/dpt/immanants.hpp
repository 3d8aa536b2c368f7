#pragma once

// Group-averaged matrix functionals J(M) = sum_g chi(g) prod_i M_{i,g(i)}
// over a permutation subgroup with an irreducible character, together with
// the dominance check against the determinant, the one-direction profile
// polynomial p(X) = J(I + X e x e), and the gain-exponent scan over the
// radially homogeneous model family.

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dpt/characters.hpp"
#include "dpt/errors.hpp"
#include "dpt/permgroup.hpp"
#include "dpt/quadrature.hpp"
#include "dpt/symmatrix.hpp"

namespace dpt {

struct ImmanantSpec {
    PermGroup group;
    std::string group_name;
    int character_index = 0;
    int chi_degree = 1;                 // chi(identity), an exact integer
    std::vector<cdouble> chi_elements;  // chi at each group element

    bool chi_is_trivial() const {
        for (const cdouble& v : chi_elements)
            if (std::abs(v - cdouble(1.0, 0.0)) > 1e-9) return false;
        return true;
    }
};

// All (subgroup fixed, irreducible character) functionals of one group.
inline std::vector<ImmanantSpec> immanant_specs(const PermGroup& g) {
    CharacterTable t = character_table(g);
    std::vector<ImmanantSpec> out;
    for (int r = 0; r < t.num_characters(); ++r) {
        ImmanantSpec s;
        s.group = g;
        s.group_name = g.structure_name();
        s.character_index = r;
        s.chi_degree = t.degrees[static_cast<std::size_t>(r)];
        s.chi_elements.resize(static_cast<std::size_t>(g.order()));
        for (int e = 0; e < g.order(); ++e) s.chi_elements[static_cast<std::size_t>(e)] = t.value(r, e);
        out.push_back(std::move(s));
    }
    return out;
}

// Every spec of every subgroup conjugacy class of S_d.
inline std::vector<ImmanantSpec> all_immanant_specs(int d) {
    std::vector<ImmanantSpec> out;
    for (const PermGroup& g : enumerate_subgroups(d))
        for (ImmanantSpec& s : immanant_specs(g)) out.push_back(std::move(s));
    return out;
}

inline cdouble immanant_complex(const ImmanantSpec& spec, const SymMatrix& m) {
    if (spec.group.degree() != m.dim())
        throw DimensionError("immanant: group degree does not match matrix dimension");
    cdouble total(0.0, 0.0);
    for (int e = 0; e < spec.group.order(); ++e) {
        const Perm& g = spec.group.element(e);
        double prod = 1.0;
        for (int i = 0; i < m.dim(); ++i) prod *= m(i, g[static_cast<std::size_t>(i)]);
        total += spec.chi_elements[static_cast<std::size_t>(e)] * prod;
    }
    return total;
}

// On symmetric input the imaginary parts cancel in (g, g^{-1}) pairs; the
// residue is checked against the sum of term magnitudes and dropped.
inline double immanant(const ImmanantSpec& spec, const SymMatrix& m) {
    if (spec.group.degree() != m.dim())
        throw DimensionError("immanant: group degree does not match matrix dimension");
    cdouble total(0.0, 0.0);
    double magnitude = 0.0;
    for (int e = 0; e < spec.group.order(); ++e) {
        const Perm& g = spec.group.element(e);
        double prod = 1.0;
        for (int i = 0; i < m.dim(); ++i) prod *= m(i, g[static_cast<std::size_t>(i)]);
        const cdouble& w = spec.chi_elements[static_cast<std::size_t>(e)];
        total += w * prod;
        magnitude += std::abs(w) * std::fabs(prod);
    }
    if (std::fabs(total.imag()) > 1e-10 * (1.0 + magnitude))
        throw NumericError("immanant has non-negligible imaginary part " + std::to_string(total.imag()));
    return total.real();
}

struct SchurReport {
    double det = 0.0;
    double imm_over_degree = 0.0;
    double slack = 0.0; // imm/chi(1) - det, >= -tolerance when the bound holds
    bool holds = false;
};

// det S <= J(S)/chi(1) on the positive semidefinite cone.
inline SchurReport schur_check(const ImmanantSpec& spec, const SymMatrix& s) {
    SchurReport r;
    r.det = detroot(s, 1.0);
    r.imm_over_degree = immanant(spec, s) / spec.chi_degree;
    r.slack = r.imm_over_degree - r.det;
    r.holds = r.slack >= -1e-12 * (1.0 + std::fabs(r.imm_over_degree));
    return r;
}

// Coefficients (constant first) of X -> J(I + X e x e) for a unit vector e,
// by evaluation at d+1 points and Vandermonde interpolation; coefficients
// below 1e-10 of the largest are trimmed to zero.
inline std::vector<double> p_poly(const ImmanantSpec& spec, std::span<const double> e) {
    const int d = spec.group.degree();
    const int npts = d + 1;
    std::vector<double> xs(static_cast<std::size_t>(npts)), ys(static_cast<std::size_t>(npts));
    for (int j = 0; j < npts; ++j) {
        double x = static_cast<double>(j);
        SymMatrix m = SymMatrix::identity(d);
        for (int a = 0; a < d; ++a)
            for (int b2 = a; b2 < d; ++b2)
                m.at(a, b2) += x * e[static_cast<std::size_t>(a)] * e[static_cast<std::size_t>(b2)];
        xs[static_cast<std::size_t>(j)] = x;
        ys[static_cast<std::size_t>(j)] = immanant(spec, m);
    }
    // Solve the Vandermonde system V c = y by Gaussian elimination.
    std::vector<double> a(static_cast<std::size_t>(npts * npts));
    for (int i = 0; i < npts; ++i)
        for (int j = 0; j < npts; ++j)
            a[static_cast<std::size_t>(i * npts + j)] = std::pow(xs[static_cast<std::size_t>(i)], j);
    std::vector<double> c = ys;
    for (int col = 0; col < npts; ++col) {
        int piv = col;
        for (int r2 = col + 1; r2 < npts; ++r2)
            if (std::fabs(a[static_cast<std::size_t>(r2 * npts + col)]) > std::fabs(a[static_cast<std::size_t>(piv * npts + col)])) piv = r2;
        for (int j = 0; j < npts; ++j) std::swap(a[static_cast<std::size_t>(col * npts + j)], a[static_cast<std::size_t>(piv * npts + j)]);
        std::swap(c[static_cast<std::size_t>(col)], c[static_cast<std::size_t>(piv)]);
        for (int r2 = 0; r2 < npts; ++r2) {
            if (r2 == col) continue;
            double f = a[static_cast<std::size_t>(r2 * npts + col)] / a[static_cast<std::size_t>(col * npts + col)];
            for (int j = col; j < npts; ++j)
                a[static_cast<std::size_t>(r2 * npts + j)] -= f * a[static_cast<std::size_t>(col * npts + j)];
            c[static_cast<std::size_t>(r2)] -= f * c[static_cast<std::size_t>(col)];
        }
    }
    for (int i = 0; i < npts; ++i) c[static_cast<std::size_t>(i)] /= a[static_cast<std::size_t>(i * npts + i)];
    double cmax = 0.0;
    for (double v : c) cmax = std::max(cmax, std::fabs(v));
    for (double& v : c)
        if (std::fabs(v) < 1e-10 * (1.0 + cmax)) v = 0.0;
    return c;
}

inline int poly_degree(const std::vector<double>& coeffs) {
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
        if (coeffs[static_cast<std::size_t>(i)] != 0.0) return i;
    return 0;
}

// Degree in X of p for generic e (all components nonzero).
inline int p_degree(const ImmanantSpec& spec) {
    const int d = spec.group.degree();
    std::vector<double> e(static_cast<std::size_t>(d));
    double nrm = 0.0;
    for (int i = 0; i < d; ++i) {
        e[static_cast<std::size_t>(i)] = std::sqrt(static_cast<double>(i) + 1.0);
        nrm += e[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)];
    }
    nrm = std::sqrt(nrm);
    for (double& v : e) v /= nrm;
    return poly_degree(p_poly(spec, e));
}

// Quadratic profile coefficient of e_i^2 e_j^2: chi(1) plus chi((i j)) when
// the transposition lies in the group. Non-negative for every spec.
inline double h_quadratic_coeff(const ImmanantSpec& spec, int i, int j) {
    const int d = spec.group.degree();
    if (i == j || i < 0 || j < 0 || i >= d || j >= d) throw DimensionError("h_quadratic_coeff needs i != j in range");
    double coeff = static_cast<double>(spec.chi_degree);
    Perm tau = perm_transposition(d, i, j);
    if (spec.group.contains(tau)) {
        cdouble v = spec.chi_elements[static_cast<std::size_t>(spec.group.index_of(tau))];
        // chi on an involution is real
        coeff += v.real();
    }
    return coeff;
}

// ---- gain-exponent scan over the model family r^{-m}(m e x e + (d-1-m) I)

inline SymMatrix tm_sphere_factor(int d, double m, const double* e) {
    SymMatrix a = SymMatrix::identity(d);
    a *= (d - 1.0 - m);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) a.at(i, j) += m * e[i] * e[j];
    return a;
}

// Exact radial factor of int_B f(T_m) for f homogeneous of degree d/(d-1):
// int_0^1 r^{d-1} r^{-m d/(d-1)} dr = (d-1)/(d (d-1-m)), valid for m < d-1.
inline double tm_radial_factor(int d, double m) {
    if (m >= d - 1.0) throw DimensionError("radial factor diverges for m >= d-1");
    return (d - 1.0) / (d * (d - 1.0 - m));
}

struct GainScanPoint {
    double m = 0.0;
    double gap = 0.0; // d-1-m
    double integral = 0.0;
};

struct GainScanResult {
    std::vector<GainScanPoint> points;
    double slope = 0.0; // d log(integral) / d log(gap) fitted on the last 4 points
};

// Gaps 2^{-2} .. 2^{-14}: the pre-asymptotic correction is O(gap log gap),
// so the fitted slope needs the last few octaves to settle.
inline std::vector<double> default_gain_grid(int d) {
    std::vector<double> m;
    for (int j = 2; j <= 14; ++j) m.push_back(d - 1.0 - std::pow(2.0, -j));
    return m;
}

// f must be homogeneous of degree d/(d-1) so the radial integral factors
// exactly; the spherical part is evaluated by quadrature.
inline GainScanResult gain_exponent_scan(const std::function<double(const SymMatrix&)>& f, int d,
                                         std::vector<double> m_grid = {}, int sphere_res = 16) {
    if (m_grid.empty()) m_grid = default_gain_grid(d);
    SphereRule rule = sphere_rule(d, sphere_res);
    GainScanResult out;
    for (double m : m_grid) {
        double s = 0.0;
        for (int q = 0; q < rule.size(); ++q)
            s += rule.weights[static_cast<std::size_t>(q)] * f(tm_sphere_factor(d, m, rule.point(q)));
        GainScanPoint p;
        p.m = m;
        p.gap = d - 1.0 - m;
        p.integral = tm_radial_factor(d, m) * s;
        out.points.push_back(p);
    }
    const int n = static_cast<int>(out.points.size());
    const int fit = std::min(4, n);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = n - fit; i < n; ++i) {
        double x = std::log(out.points[static_cast<std::size_t>(i)].gap);
        double y = std::log(std::max(out.points[static_cast<std::size_t>(i)].integral, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.slope = (fit * sxy - sx * sy) / (fit * sxx - sx * sx);
    return out;
}

// sigma_k(A)^{d/(k(d-1))}, homogeneous of degree d/(d-1).
inline std::function<double(const SymMatrix&)> sigma_gain(int d, int k) {
    return [d, k](const SymMatrix& a) {
        double s = sigma_k(a, k);
        return std::pow(std::max(s, 0.0), static_cast<double>(d) / (k * (d - 1.0)));
    };
}

// (J(A)/chi(1))^{1/(d-1)}; J is non-negative on the cone by dominance.
inline std::function<double(const SymMatrix&)> immanant_gain(const ImmanantSpec& spec) {
    const int d = spec.group.degree();
    return [spec, d](const SymMatrix& a) {
        double v = immanant(spec, a) / spec.chi_degree;
        return std::pow(std::max(v, 0.0), 1.0 / (d - 1.0));
    };
}

// Expected fitted slope for sigma_k gains: (k-1) d / (k (d-1)) - 1.
inline double sigma_gain_slope(int d, int k) {
    return (k - 1.0) * d / (k * (d - 1.0)) - 1.0;
}

// Expected fitted slope for an immanant gain with profile degree kappa:
// (d - kappa)/(d - 1) - 1.
inline double immanant_gain_slope(int d, int kappa) {
    return (d - kappa) / (d - 1.0) - 1.0;
}

} // namespace dpt
