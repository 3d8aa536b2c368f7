#pragma once

// Pointwise energy-momentum tensors from three models: the linear wave
// equation, electromagnetism with a Lorentz-invariant lagrangian, and
// entropy-compatible first-order systems generated by a single potential
// (barotropic gas dynamics). Everything here is tensor algebra at a single
// state; time integration lives in the kinetic module.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "dpt/errors.hpp"
#include "dpt/symmatrix.hpp"

namespace dpt {

namespace detail {

inline double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline std::array<double, 3> cross3(const std::array<double, 3>& a,
                                    const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

} // namespace detail

// State of a wave field at one space-time point: u_t and the spatial
// gradient of a solution of u_tt = c^2 Lap u in n space dimensions.
struct WaveState {
    int n = 1;
    double c = 1.0;
    double ut = 0.0;
    std::vector<double> grad;
};

// Energy-momentum tensor of the wave field, size (1+n). Row zero is energy
// density and flux; the divergence-free property encodes conservation of
// energy and momentum. Positive semidefinite exactly when c |grad u| <= |u_t|
// (always true for n = 1).
inline SymMatrix wave_tensor(const WaveState& s) {
    if (static_cast<int>(s.grad.size()) != s.n)
        throw DimensionError("wave state gradient size must equal n");
    const double c2 = s.c * s.c;
    double g2 = 0.0;
    for (double gi : s.grad) g2 += gi * gi;
    SymMatrix t(1 + s.n);
    t.at(0, 0) = 0.5 * (s.ut * s.ut + c2 * g2);
    const double lateral = 0.5 * c2 * (s.ut * s.ut - c2 * g2);
    for (int i = 0; i < s.n; ++i) {
        t.at(0, 1 + i) = -c2 * s.ut * s.grad[static_cast<std::size_t>(i)];
        t.at(1 + i, 1 + i) = lateral;
        for (int j = i; j < s.n; ++j)
            t.at(1 + i, 1 + j) += c2 * c2 * s.grad[static_cast<std::size_t>(i)] *
                                  s.grad[static_cast<std::size_t>(j)];
    }
    return t;
}

struct WaveDetReport {
    double det_direct = 0.0;
    double det_formula = 0.0;
    bool match = false;
};

// det T = c^{2n} ((u_t^2 - c^2 |grad u|^2)/2)^{n+1}: sign fixed by parity of
// n, positive when n is odd regardless of the positivity of T.
inline WaveDetReport wave_det_identity(const WaveState& s) {
    SymMatrix t = wave_tensor(s);
    double g2 = 0.0;
    for (double gi : s.grad) g2 += gi * gi;
    WaveDetReport rep;
    rep.det_direct = sigma_k(t, 1 + s.n);
    rep.det_formula = std::pow(s.c, 2.0 * s.n) *
                      std::pow(0.5 * (s.ut * s.ut - s.c * s.c * g2), s.n + 1.0);
    rep.match = std::fabs(rep.det_direct - rep.det_formula) <=
                1e-10 * (1.0 + std::fabs(rep.det_formula));
    return rep;
}

// Companion tensor of a harmonic function: grad u @ grad u - (1/2)|grad u|^2 I.
// Divergence-free whenever Lap u = 0, indefinite with eigenvalues
// +-(1/2)|grad u|^2, yet |det| still integrates one power better. Kept as a
// documented contrast to the wave tensor; no elliptic solve here.
inline SymMatrix laplace_tensor(const std::vector<double>& grad) {
    const int d = static_cast<int>(grad.size());
    double g2 = 0.0;
    for (double gi : grad) g2 += gi * gi;
    SymMatrix t(d);
    for (int i = 0; i < d; ++i) {
        t.at(i, i) = -0.5 * g2;
        for (int j = i; j < d; ++j)
            t.at(i, j) += grad[static_cast<std::size_t>(i)] * grad[static_cast<std::size_t>(j)];
    }
    return t;
}

// Lorentz-invariant electromagnetic lagrangian: a scalar function of
// sigma = (|B|^2-|E|^2)/2 and pi = B.E. Partial derivatives may be supplied;
// missing ones fall back to central differences with relative step 1e-6.
struct Lagrangian {
    std::function<double(double, double)> value;
    std::function<double(double, double)> d_sigma;
    std::function<double(double, double)> d_pi;

    double ds(double s, double p) const {
        if (d_sigma) return d_sigma(s, p);
        double h = 1e-6 * (1.0 + std::fabs(s));
        return (value(s + h, p) - value(s - h, p)) / (2.0 * h);
    }
    double dp(double s, double p) const {
        if (d_pi) return d_pi(s, p);
        double h = 1e-6 * (1.0 + std::fabs(p));
        return (value(s, p + h) - value(s, p - h)) / (2.0 * h);
    }

    // Classical linear theory, l = -sigma.
    static Lagrangian linear_vacuum() {
        Lagrangian l;
        l.value = [](double s, double) { return -s; };
        l.d_sigma = [](double, double) { return -1.0; };
        l.d_pi = [](double, double) { return 0.0; };
        return l;
    }

    // Born-Infeld type model, l = 1 - sqrt(1 + 2 sigma - pi^2), defined where
    // the radicand is positive.
    static Lagrangian born_infeld() {
        Lagrangian l;
        l.value = [](double s, double p) { return 1.0 - std::sqrt(1.0 + 2.0 * s - p * p); };
        l.d_sigma = [](double s, double p) { return -1.0 / std::sqrt(1.0 + 2.0 * s - p * p); };
        l.d_pi = [](double s, double p) { return p / std::sqrt(1.0 + 2.0 * s - p * p); };
        return l;
    }
};

// Electromagnetic state (B, E) under a Lorentz-invariant lagrangian, with
// the induced fields D = -l_s E + l_p B and H = -l_s B - l_p E. For this
// form the Minkowski momentum D x B and the Abraham momentum E x H coincide
// identically, which is what makes the energy-momentum tensor symmetric.
struct MaxwellState {
    std::array<double, 3> b{};
    std::array<double, 3> e{};
    Lagrangian lag = Lagrangian::linear_vacuum();

    double sigma() const { return 0.5 * (detail::dot3(b, b) - detail::dot3(e, e)); }
    double pi() const { return detail::dot3(b, e); }

    std::array<double, 3> d_field() const {
        double ls = lag.ds(sigma(), pi()), lp = lag.dp(sigma(), pi());
        return {-ls * e[0] + lp * b[0], -ls * e[1] + lp * b[1], -ls * e[2] + lp * b[2]};
    }
    std::array<double, 3> h_field() const {
        double ls = lag.ds(sigma(), pi()), lp = lag.dp(sigma(), pi());
        return {-ls * b[0] - lp * e[0], -ls * b[1] - lp * e[1], -ls * b[2] - lp * e[2]};
    }
    double energy_density() const {
        return detail::dot3(d_field(), e) - lag.value(sigma(), pi());
    }
    std::array<double, 3> poynting_minkowski() const { return detail::cross3(d_field(), b); }
    std::array<double, 3> poynting_abraham() const { return detail::cross3(e, h_field()); }
};

// 4x4 energy-momentum tensor: W in the corner, the Poynting vector as
// momentum row, and l_s (E@E + B@B) + (l + B.H) I_3 in the space block.
inline SymMatrix maxwell_tensor(const MaxwellState& s) {
    double sg = s.sigma(), p = s.pi();
    double ls = s.lag.ds(sg, p);
    double lval = s.lag.value(sg, p);
    std::array<double, 3> h = s.h_field();
    std::array<double, 3> poy = s.poynting_minkowski();
    SymMatrix t(4);
    t.at(0, 0) = s.energy_density();
    double iso = lval + detail::dot3(s.b, h);
    for (int i = 0; i < 3; ++i) {
        t.at(0, 1 + i) = poy[static_cast<std::size_t>(i)];
        t.at(1 + i, 1 + i) = iso;
        for (int j = i; j < 3; ++j)
            t.at(1 + i, 1 + j) += ls * (s.e[static_cast<std::size_t>(i)] * s.e[static_cast<std::size_t>(j)] +
                                        s.b[static_cast<std::size_t>(i)] * s.b[static_cast<std::size_t>(j)]);
    }
    return t;
}

// Lagrangian given directly in the field variables, L(B, E), with optional
// analytic gradients and the same central-difference fallback. This is the
// doorway for models that are NOT Lorentz-invariant; the tensor builder
// detects them through the momentum mismatch.
struct FieldLagrangian {
    std::function<double(const std::array<double, 3>&, const std::array<double, 3>&)> value;
    std::function<std::array<double, 3>(const std::array<double, 3>&,
                                        const std::array<double, 3>&)> grad_b;
    std::function<std::array<double, 3>(const std::array<double, 3>&,
                                        const std::array<double, 3>&)> grad_e;

    std::array<double, 3> db(const std::array<double, 3>& b,
                             const std::array<double, 3>& e) const {
        if (grad_b) return grad_b(b, e);
        std::array<double, 3> g{};
        for (int i = 0; i < 3; ++i) {
            auto ib = static_cast<std::size_t>(i);
            double h = 1e-6 * (1.0 + std::fabs(b[ib]));
            std::array<double, 3> bp = b, bm = b;
            bp[ib] += h;
            bm[ib] -= h;
            g[ib] = (value(bp, e) - value(bm, e)) / (2.0 * h);
        }
        return g;
    }
    std::array<double, 3> de(const std::array<double, 3>& b,
                             const std::array<double, 3>& e) const {
        if (grad_e) return grad_e(b, e);
        std::array<double, 3> g{};
        for (int i = 0; i < 3; ++i) {
            auto ie = static_cast<std::size_t>(i);
            double h = 1e-6 * (1.0 + std::fabs(e[ie]));
            std::array<double, 3> ep = e, em = e;
            ep[ie] += h;
            em[ie] -= h;
            g[ie] = (value(b, ep) - value(b, em)) / (2.0 * h);
        }
        return g;
    }
};

// Build the tensor from a raw L(B, E). D and H come straight from the
// gradients; if D x B and E x H disagree beyond tol the lagrangian is not a
// function of (sigma, pi) alone and no symmetric tensor exists. Otherwise
// l_s and l_p are recovered by projection (the two constraint columns are
// exactly orthogonal, with squared norm |B|^2 + |E|^2).
inline SymMatrix maxwell_tensor_general(const std::array<double, 3>& b,
                                        const std::array<double, 3>& e,
                                        const FieldLagrangian& lag, double tol = 1e-6) {
    std::array<double, 3> d = lag.de(b, e);
    std::array<double, 3> h = lag.db(b, e);
    for (auto& hi : h) hi = -hi;
    std::array<double, 3> pm = detail::cross3(d, b);
    std::array<double, 3> pa = detail::cross3(e, h);
    double mismatch = 0.0, scale = 0.0;
    for (int i = 0; i < 3; ++i) {
        auto ii = static_cast<std::size_t>(i);
        mismatch = std::max(mismatch, std::fabs(pm[ii] - pa[ii]));
        scale = std::max({scale, std::fabs(pm[ii]), std::fabs(pa[ii])});
    }
    if (mismatch > tol * (1.0 + scale))
        throw PqMismatchError("momentum forms disagree by " + std::to_string(mismatch) +
                              "; lagrangian is not Lorentz-invariant");
    double denom = detail::dot3(b, b) + detail::dot3(e, e);
    double ls = 0.0, lp = 0.0;
    if (denom > 0.0) {
        ls = (-detail::dot3(e, d) - detail::dot3(b, h)) / denom;
        lp = (detail::dot3(b, d) - detail::dot3(e, h)) / denom;
    }
    Lagrangian wrap;
    double lval = lag.value(b, e);
    wrap.value = [lval](double, double) { return lval; };
    wrap.d_sigma = [ls](double, double) { return ls; };
    wrap.d_pi = [lp](double, double) { return lp; };
    MaxwellState s{b, e, wrap};
    return maxwell_tensor(s);
}

struct MaxwellDetReport {
    double det_s = 0.0;     // planar block, from the closed form
    double det_r = 0.0;     // complementary block, direct
    double det_t = 0.0;     // full 4x4, direct
    bool holds = false;     // det_s = -det_r and det_t = -(det_s)^2
    bool degenerate = false; // B and E (nearly) parallel: blocks not separated
};

// The tensor splits over R x RP and Span(B,E). det S has the closed form
// l_s^2 (sigma^2 + pi^2) - (l - sigma l_s - pi l_p)^2, equals -det R, and
// det T = -(det S)^2: T is never positive semidefinite.
inline MaxwellDetReport maxwell_det_identities(const MaxwellState& s, double tol = 1e-9) {
    double sg = s.sigma(), p = s.pi();
    double ls = s.lag.ds(sg, p), lp = s.lag.dp(sg, p);
    double lval = s.lag.value(sg, p);
    MaxwellDetReport rep;
    double affine = lval - sg * ls - p * lp;
    rep.det_s = ls * ls * (sg * sg + p * p) - affine * affine;
    rep.det_r = (lval - p * lp) * (lval - 2.0 * sg * ls - p * lp) - p * p * ls * ls;
    rep.det_t = sigma_k(maxwell_tensor(s), 4);
    std::array<double, 3> bxe = detail::cross3(s.b, s.e);
    double area = std::sqrt(detail::dot3(bxe, bxe));
    rep.degenerate = area <= 1e-12 * (1.0 + std::sqrt(detail::dot3(s.b, s.b) *
                                                      detail::dot3(s.e, s.e)));
    double scale = 1.0 + rep.det_s * rep.det_s + std::fabs(rep.det_s);
    rep.holds = std::fabs(rep.det_s + rep.det_r) <= tol * scale &&
                std::fabs(rep.det_t + rep.det_s * rep.det_s) <= tol * scale;
    return rep;
}

// Godunov structure of a system of conservation laws with a convex entropy
// in d = 1+n variables: all fluxes derive from one potential R, and the
// space-time tensor is R'' V@V + R' diag(0, I_n) in the conjugate variables
// q, with V = (1, q_1..q_n) and lambda = q_0 + (1/2) sum q_i^2. For a
// barotropic gas R' is the pressure and R'' the density, as functions of
// lambda = eps'(rho).
struct GasPotential {
    int n = 1;
    std::vector<double> q;                  // size 1+n
    std::function<double(double)> pressure; // R'
    std::function<double(double)> density;  // R''

    double lambda() const {
        if (static_cast<int>(q.size()) != n + 1)
            throw DimensionError("gas state needs 1+n conjugate variables");
        double l = q[0];
        for (int i = 1; i <= n; ++i) l += 0.5 * q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i)];
        return l;
    }
};

inline SymMatrix godunov_tensor(const GasPotential& g) {
    double l = g.lambda();
    double r1 = g.pressure(l), r2 = g.density(l);
    SymMatrix t(1 + g.n);
    for (int i = 0; i <= g.n; ++i) {
        double vi = (i == 0) ? 1.0 : g.q[static_cast<std::size_t>(i)];
        if (i > 0) t.at(i, i) = r1;
        for (int j = i; j <= g.n; ++j) {
            double vj = (j == 0) ? 1.0 : g.q[static_cast<std::size_t>(j)];
            t.at(i, j) += r2 * vi * vj;
        }
    }
    return t;
}

// Integrand of the space-time gas estimate: R' R''^{1/n}, i.e. pressure
// times density^{1/n}. Demands the positive cone, where the tensor is a DPT.
inline double gas_estimate_integrand(const GasPotential& g) {
    double l = g.lambda();
    double r1 = g.pressure(l), r2 = g.density(l);
    if (r1 < 0.0 || r2 < 0.0)
        throw NotPsdError("gas potential is outside the convex cone: R'=" +
                          std::to_string(r1) + ", R''=" + std::to_string(r2));
    return r1 * std::pow(r2, 1.0 / g.n);
}

} // namespace dpt
