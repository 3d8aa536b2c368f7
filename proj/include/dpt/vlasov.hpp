#pragma once

// Kinetic transport with a self-induced force: f(t, y, v) advected by
// (v, F(t,y)) where F = -d_y (chi * rho). One space dimension drives the
// dynamics; the non-local interaction tensor S, which rewrites -rho F as a
// space divergence, is also available pointwise in higher dimension for
// frozen densities. Assembling [[rho, m], [m, p2 + S]] over a run gives a
// space-time tensor that is positive exactly when the kernel is repulsive,
// and the slab inequality then yields an a-priori bound of degree 2 + 1/n
// in the density.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dpt/citest.hpp"
#include "dpt/errors.hpp"
#include "dpt/geometry.hpp"
#include "dpt/quadrature.hpp"
#include "dpt/symmatrix.hpp"
#include "dpt/tensorfield.hpp"

namespace dpt {

// Radial interaction kernel chi(r). The force between two particles at
// distance r is repulsive when chi decreases. phi(r) = r |chi'(r)| controls
// the L^1 norm of the interaction tensor.
struct Kernel {
    std::function<double(double)> chi;
    std::function<double(double)> chi_prime;
    bool monotone_nonincreasing = false;
    bool bounded_below = false;

    double phi(double r) const { return r * std::fabs(chi_prime(r)); }

    // Largest phi / (1 + chi) over [0, rmax]: finite for kernels whose
    // interaction tensor is controlled by mass and energy alone.
    double l1_control_constant(double rmax, int samples = 512) const {
        double worst = 0.0;
        for (int k = 0; k <= samples; ++k) {
            double r = rmax * k / samples;
            double denom = 1.0 + chi(r);
            if (denom <= 1e-12) return std::numeric_limits<double>::infinity();
            worst = std::max(worst, phi(r) / denom);
        }
        return worst;
    }

    // Checks the declared flags against samples on [0, rmax].
    void validate(double rmax, int samples = 256) const {
        if (!chi || !chi_prime) throw ConfigError("kernel needs chi and chi_prime");
        if (monotone_nonincreasing)
            for (int k = 0; k <= samples; ++k) {
                double r = rmax * k / samples;
                if (chi_prime(r) > 1e-12)
                    throw ConfigError("kernel flagged non-increasing but chi' > 0 at r = " +
                                      std::to_string(r));
            }
    }

    // Screened repulsion e^{-r}: non-increasing, bounded, phi <= 1 + chi.
    static Kernel exponential() {
        Kernel k;
        k.chi = [](double r) { return std::exp(-r); };
        k.chi_prime = [](double r) { return -std::exp(-r); };
        k.monotone_nonincreasing = true;
        k.bounded_below = true;
        return k;
    }

    // Coulomb force on the line: chi = -r/2 solves chi'' = -delta up to
    // normalization. Repulsive but unbounded below, so no shifted
    // non-negative energy exists.
    static Kernel coulomb_line() {
        Kernel k;
        k.chi = [](double r) { return -0.5 * r; };
        k.chi_prime = [](double) { return -0.5; };
        k.monotone_nonincreasing = true;
        k.bounded_below = false;
        return k;
    }

    // No interaction: free streaming.
    static Kernel none() {
        Kernel k;
        k.chi = [](double) { return 0.0; };
        k.chi_prime = [](double) { return 0.0; };
        k.monotone_nonincreasing = true;
        k.bounded_below = true;
        return k;
    }
};

// Phase-space density on the uniform grid [-L, L] x [-V, V], nodes
// inclusive of the endpoints, f[i*nv + j] at (y_i, v_j).
struct KineticState {
    Kernel kernel;
    double length = 0.0, vmax = 0.0;
    int ny = 0, nv = 0;
    double time = 0.0;
    double decay_tol = 1e-8;
    double clipped_mass = 0.0; // |mass| added by clamping negatives, cumulative
    std::vector<double> f;

    double dy() const { return 2.0 * length / (ny - 1); }
    double dv() const { return 2.0 * vmax / (nv - 1); }
    double y_of(int i) const { return -length + 2.0 * length * i / (ny - 1); }
    double v_of(int j) const { return -vmax + 2.0 * vmax * j / (nv - 1); }
    double& at(int i, int j) { return f[static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(j)]; }
    double at(int i, int j) const { return f[static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(j)]; }
};

// Sample an initial condition. The density must be non-negative and decayed
// below decay_tol (relative to its peak) on the phase-space boundary.
inline KineticState initial_state(Kernel kernel, double length, int ny, double vmax,
                                  int nv, const std::function<double(double, double)>& f0,
                                  double decay_tol = 1e-8) {
    if (!(length > 0.0) || !(vmax > 0.0)) throw ConfigError("phase-space box must be positive");
    if (ny < 8 || nv < 8) throw ConfigError("grid resolutions must be at least 8");
    kernel.validate(2.0 * length);
    KineticState s;
    s.kernel = std::move(kernel);
    s.length = length;
    s.vmax = vmax;
    s.ny = ny;
    s.nv = nv;
    s.decay_tol = decay_tol;
    s.f.resize(static_cast<std::size_t>(ny) * static_cast<std::size_t>(nv));
    double peak = 0.0;
    for (int i = 0; i < ny; ++i)
        for (int j = 0; j < nv; ++j) {
            double val = f0(s.y_of(i), s.v_of(j));
            if (val < 0.0) throw ConfigError("initial density must be non-negative");
            s.at(i, j) = val;
            peak = std::max(peak, val);
        }
    if (peak <= 0.0) throw ConfigError("initial density must have positive mass");
    double edge = 0.0;
    for (int i = 0; i < ny; ++i)
        edge = std::max({edge, s.at(i, 0), s.at(i, nv - 1)});
    for (int j = 0; j < nv; ++j)
        edge = std::max({edge, s.at(0, j), s.at(ny - 1, j)});
    if (edge > decay_tol * peak)
        throw DecayError("initial data does not decay on the phase-space boundary: edge/peak = " +
                         std::to_string(edge / peak));
    return s;
}

// Velocity moments per space node, trapezoid in v.
struct Moments {
    std::vector<double> rho, m, p2;
};

inline Moments moments(const KineticState& s) {
    Moments out;
    out.rho.assign(static_cast<std::size_t>(s.ny), 0.0);
    out.m.assign(static_cast<std::size_t>(s.ny), 0.0);
    out.p2.assign(static_cast<std::size_t>(s.ny), 0.0);
    for (int i = 0; i < s.ny; ++i) {
        double r = 0.0, mm = 0.0, pp = 0.0;
        for (int j = 0; j < s.nv; ++j) {
            double w = (j == 0 || j == s.nv - 1) ? 0.5 : 1.0;
            double v = s.v_of(j);
            double val = w * s.at(i, j);
            r += val;
            mm += val * v;
            pp += val * v * v;
        }
        auto ii = static_cast<std::size_t>(i);
        out.rho[ii] = r * s.dv();
        out.m[ii] = mm * s.dv();
        out.p2[ii] = pp * s.dv();
    }
    return out;
}

struct ForceField {
    std::vector<double> potential; // chi * rho
    std::vector<double> force;     // -d_y (chi * rho)
};

// Direct quadrature convolution. The force uses the analytic kernel
// derivative with sgn(0) = 0, so the discrete momentum exchange
// sum_i w_i rho_i F_i is antisymmetric and vanishes to rounding.
inline ForceField potential_force(const std::vector<double>& rho, double length,
                                  const Kernel& k) {
    const int n = static_cast<int>(rho.size());
    if (n < 2) throw ConfigError("density grid too small");
    const double dy = 2.0 * length / (n - 1);
    ForceField out;
    out.potential.assign(static_cast<std::size_t>(n), 0.0);
    out.force.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double yi = -length + i * dy;
        double phi = 0.0, grad = 0.0;
        for (int j = 0; j < n; ++j) {
            double w = ((j == 0 || j == n - 1) ? 0.5 : 1.0) * dy * rho[static_cast<std::size_t>(j)];
            if (w == 0.0) continue;
            double sep = yi - (-length + j * dy);
            double r = std::fabs(sep);
            phi += w * k.chi(r);
            if (sep != 0.0) grad += w * k.chi_prime(r) * (sep > 0.0 ? 1.0 : -1.0);
        }
        out.potential[static_cast<std::size_t>(i)] = phi;
        out.force[static_cast<std::size_t>(i)] = -grad;
    }
    return out;
}

struct EnergyReport {
    double kinetic = 0.0;
    double potential = 0.0; // (1/2) integral (chi * rho) rho
    double total = 0.0;
    double mass = 0.0;
    double shift_constant = 0.0; // cst such that total + cst * mass >= 0
    double shifted = 0.0;
    bool shifted_valid = false;
};

inline EnergyReport energy(const KineticState& s) {
    EnergyReport rep;
    for (int i = 0; i < s.ny; ++i) {
        double wy = (i == 0 || i == s.ny - 1) ? 0.5 : 1.0;
        for (int j = 0; j < s.nv; ++j) {
            double w = wy * ((j == 0 || j == s.nv - 1) ? 0.5 : 1.0) * s.dy() * s.dv();
            double v = s.v_of(j);
            rep.kinetic += 0.5 * v * v * w * s.at(i, j);
            rep.mass += w * s.at(i, j);
        }
    }
    Moments mom = moments(s);
    ForceField ff = potential_force(mom.rho, s.length, s.kernel);
    for (int i = 0; i < s.ny; ++i) {
        double wy = ((i == 0 || i == s.ny - 1) ? 0.5 : 1.0) * s.dy();
        rep.potential += 0.5 * wy * ff.potential[static_cast<std::size_t>(i)] *
                         mom.rho[static_cast<std::size_t>(i)];
    }
    rep.total = rep.kinetic + rep.potential;
    if (s.kernel.bounded_below) {
        double lo = 0.0;
        for (int k = 0; k <= 512; ++k)
            lo = std::min(lo, s.kernel.chi(2.0 * s.length * k / 512.0));
        rep.shift_constant = 0.5 * (-lo) * rep.mass;
        rep.shifted = rep.total + rep.shift_constant * rep.mass;
        rep.shifted_valid = true;
    }
    return rep;
}

namespace detail {

// Cubic Lagrange sample of a uniformly gridded line at coordinate x
// (x0 + k h at node k); zero extension outside.
inline double sample_line(const std::vector<double>& line, double x0, double h, double x) {
    const int n = static_cast<int>(line.size());
    double u = (x - x0) / h;
    int base = static_cast<int>(std::floor(u));
    double t = u - base;
    double acc = 0.0;
    const double w[4] = {-t * (t - 1.0) * (t - 2.0) / 6.0,
                         (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                         -(t + 1.0) * t * (t - 2.0) / 2.0,
                         (t + 1.0) * t * (t - 1.0) / 6.0};
    for (int k = 0; k < 4; ++k) {
        int idx = base - 1 + k;
        if (idx >= 0 && idx < n) acc += w[k] * line[static_cast<std::size_t>(idx)];
    }
    return acc;
}

// Semi-Lagrangian shift of one line: dst[k] = src at (k h - shift), cubic,
// clamped at zero. Returns the mass (in h units) added by the clamping.
inline double shift_line(const double* src, int n, int stride, double shift, double h,
                         double* dst) {
    double s = shift / h;
    int whole = static_cast<int>(std::floor(s));
    double t = s - whole;
    const double w[4] = {-t * (t - 1.0) * (t - 2.0) / 6.0,
                         (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
                         -(t + 1.0) * t * (t - 2.0) / 2.0,
                         (t + 1.0) * t * (t - 1.0) / 6.0};
    double clipped = 0.0;
    for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int c = 0; c < 4; ++c) {
            int idx = k - whole - 2 + c;
            if (idx >= 0 && idx < n) acc += w[3 - c] * src[idx * stride];
        }
        if (acc < 0.0) {
            clipped -= acc;
            acc = 0.0;
        }
        dst[k] = acc;
    }
    return clipped * h;
}

} // namespace detail

// One Strang-split step: half transport in y, full force kick in v with the
// field frozen at mid-step, half transport again. Throws when dt exceeds
// the one-cell displacement bound.
inline void advance(KineticState& s, double dt) {
    if (!(dt > 0.0)) throw ConfigError("time step must be positive");
    if (dt > s.dy() / s.vmax * (1.0 + 1e-12))
        throw CflError("dt " + std::to_string(dt) + " exceeds dy/vmax = " +
                       std::to_string(s.dy() / s.vmax));
    std::vector<double> buf(static_cast<std::size_t>(std::max(s.ny, s.nv)));
    auto transport_half = [&s, &buf, dt]() {
        for (int j = 0; j < s.nv; ++j) {
            double shift = s.v_of(j) * dt / 2.0;
            double gain = detail::shift_line(s.f.data() + j, s.ny, s.nv, shift, s.dy(),
                                             buf.data());
            s.clipped_mass += gain * s.dv();
            for (int i = 0; i < s.ny; ++i) s.at(i, j) = buf[static_cast<std::size_t>(i)];
        }
    };
    transport_half();
    Moments mom = moments(s);
    ForceField ff = potential_force(mom.rho, s.length, s.kernel);
    double fmax = 0.0;
    for (double fi : ff.force) fmax = std::max(fmax, std::fabs(fi));
    if (fmax > 0.0 && dt > s.dv() / fmax * (1.0 + 1e-12))
        throw CflError("dt " + std::to_string(dt) + " exceeds dv/max|F| = " +
                       std::to_string(s.dv() / fmax));
    for (int i = 0; i < s.ny; ++i) {
        double shift = ff.force[static_cast<std::size_t>(i)] * dt;
        if (shift == 0.0) continue;
        double gain = detail::shift_line(s.f.data() + static_cast<std::size_t>(i) * static_cast<std::size_t>(s.nv),
                                         s.nv, 1, shift, s.dv(), buf.data());
        s.clipped_mass += gain * s.dy();
        for (int j = 0; j < s.nv; ++j) s.at(i, j) = buf[static_cast<std::size_t>(j)];
    }
    transport_half();
    s.time += dt;
}

inline KineticState step(KineticState s, double dt) {
    advance(s, dt);
    return s;
}

// Interaction tensor on the density grid (one space dimension):
// S(y) = -int_0^inf chi'(z) z dz int_{-1/2}^{1/2} rho(y+(s-1/2)z) rho(y+(s+1/2)z) ds.
// Gauss-Legendre in s (the integrand is analytic in s, so doubling the node
// count is a no-op within rounding), step-dy rectangle rule in z truncated
// to the support of rho. Non-negative for non-increasing chi.
inline std::vector<double> interaction_tensor(const std::vector<double>& rho, double length,
                                              const Kernel& k, int s_nodes = 8) {
    const int n = static_cast<int>(rho.size());
    if (n < 2) throw ConfigError("density grid too small");
    const double dy = 2.0 * length / (n - 1);
    double peak = 0.0;
    for (double r : rho) peak = std::max(peak, std::fabs(r));
    int lo = 0, hi = n - 1;
    while (lo < hi && std::fabs(rho[static_cast<std::size_t>(lo)]) <= 1e-13 * peak) ++lo;
    while (hi > lo && std::fabs(rho[static_cast<std::size_t>(hi)]) <= 1e-13 * peak) --hi;
    const double zmax = std::min(2.0 * length, (hi - lo + 2) * dy);
    const int kmax = std::max(1, static_cast<int>(std::ceil(zmax / dy)));
    Rule1D srule = gauss_legendre(s_nodes, -0.5, 0.5);
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (peak == 0.0) return out;
    for (int i = 0; i < n; ++i) {
        double yi = -length + i * dy;
        double total = 0.0;
        for (int kz = 1; kz <= kmax; ++kz) {
            double z = kz * dy;
            double cp = k.chi_prime(z);
            if (cp == 0.0) continue;
            double g = 0.0;
            for (int q = 0; q < srule.size(); ++q) {
                double sq = srule.nodes[static_cast<std::size_t>(q)];
                double a = detail::sample_line(rho, -length, dy, yi + (sq - 0.5) * z);
                double b = detail::sample_line(rho, -length, dy, yi + (sq + 0.5) * z);
                g += srule.weights[static_cast<std::size_t>(q)] * a * b;
            }
            total -= dy * cp * z * g;
        }
        out[static_cast<std::size_t>(i)] = total;
    }
    return out;
}

// Pointwise interaction tensor in n space dimensions for a frozen density
// given in closed form; the z integral runs in polar form over [0, radius].
inline SymMatrix interaction_tensor_at(int n, const std::function<double(const double*)>& rho,
                                       const Kernel& k, const double* y, double radius,
                                       int radial_nodes = 64, int sphere_res = 32,
                                       int s_nodes = 8) {
    if (n < 1 || n > 3) throw DimensionError("interaction tensor supports 1 <= n <= 3");
    Rule1D rrule = gauss_legendre(radial_nodes, 0.0, radius);
    Rule1D srule = gauss_legendre(s_nodes, -0.5, 0.5);
    std::vector<double> dirs;
    std::vector<double> dweights;
    if (n == 1) {
        dirs = {1.0, -1.0};
        dweights = {1.0, 1.0};
    } else {
        SphereRule rule = sphere_rule(n, sphere_res);
        dirs = rule.points;
        dweights = rule.weights;
    }
    SymMatrix out(n);
    double xa[3], xb[3];
    for (std::size_t e = 0; e < dweights.size(); ++e) {
        const double* dir = dirs.data() + e * static_cast<std::size_t>(n);
        double block = 0.0;
        for (int ir = 0; ir < rrule.size(); ++ir) {
            double r = rrule.nodes[static_cast<std::size_t>(ir)];
            double g = 0.0;
            for (int q = 0; q < srule.size(); ++q) {
                double sq = srule.nodes[static_cast<std::size_t>(q)];
                for (int a = 0; a < n; ++a) {
                    xa[a] = y[a] + (sq - 0.5) * r * dir[a];
                    xb[a] = y[a] + (sq + 0.5) * r * dir[a];
                }
                g += srule.weights[static_cast<std::size_t>(q)] * rho(xa) * rho(xb);
            }
            block -= 0.5 * rrule.weights[static_cast<std::size_t>(ir)] * k.chi_prime(r) *
                     std::pow(r, n) * g;
        }
        block *= dweights[e];
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) out.at(i, j) += block * dir[i] * dir[j];
    }
    return out;
}

// Interior sup norm of d_y S + rho F: zero in the continuum, and the
// discrete defect must shrink at second order under refinement.
inline double divergence_identity_check(const std::vector<double>& rho,
                                        const std::vector<double>& s_field,
                                        const std::vector<double>& force, double length) {
    const int n = static_cast<int>(rho.size());
    if (static_cast<int>(s_field.size()) != n || static_cast<int>(force.size()) != n)
        throw DimensionError("divergence check needs matching grids");
    const double dy = 2.0 * length / (n - 1);
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        double ds = (s_field[static_cast<std::size_t>(i) + 1] - s_field[static_cast<std::size_t>(i) - 1]) / (2.0 * dy);
        worst = std::max(worst, std::fabs(ds + rho[static_cast<std::size_t>(i)] *
                                                   force[static_cast<std::size_t>(i)]));
    }
    return worst;
}

struct SBoundReport {
    double lhs = 0.0; // integral of |S|
    double rhs = 0.0; // (1/2) double integral of phi(|w-v|) rho(v) rho(w)
    bool holds = false;
};

inline SBoundReport s_l1_bound_check(const std::vector<double>& rho, double length,
                                     const Kernel& k, int s_nodes = 8) {
    const int n = static_cast<int>(rho.size());
    const double dy = 2.0 * length / (n - 1);
    std::vector<double> s_field = interaction_tensor(rho, length, k, s_nodes);
    SBoundReport rep;
    for (int i = 0; i < n; ++i) {
        double w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * dy;
        rep.lhs += w * std::fabs(s_field[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < n; ++i) {
        double wi = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * dy * rho[static_cast<std::size_t>(i)];
        if (wi == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            double wj = ((j == 0 || j == n - 1) ? 0.5 : 1.0) * dy * rho[static_cast<std::size_t>(j)];
            rep.rhs += 0.5 * wi * wj * k.phi(dy * std::abs(i - j));
        }
    }
    // The two sides are independent second-order quadratures of the same pair
    // integral, so they may disagree by scheme error in either direction.
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-6) + 1e-12;
    return rep;
}

// Diagnostics and stored fields of a full run, one entry per time node.
struct RunRecord {
    Kernel kernel;
    double length = 0.0, vmax = 0.0, tau = 0.0;
    int ny = 0, steps = 0;
    double decay_tol = 1e-8;
    std::vector<double> times, mass, momentum, energy_total;
    std::vector<Moments> snapshots;
    std::vector<std::vector<double>> s_field;
    double clipped_mass = 0.0;
    // Slab traces at the two time faces: integral of |T e_t| = sqrt(rho^2 + m^2) dy.
    double trace_start = 0.0, trace_end = 0.0;
    // Phase-space density at t = tau, row-major over (y, v).
    int nv = 0;
    std::vector<double> final_f;
};

inline RunRecord run_simulation(KineticState state, double tau, int steps, int s_nodes = 8) {
    if (steps < 1) throw ConfigError("run needs at least one step");
    RunRecord rec;
    rec.kernel = state.kernel;
    rec.length = state.length;
    rec.vmax = state.vmax;
    rec.tau = tau;
    rec.ny = state.ny;
    rec.steps = steps;
    rec.decay_tol = state.decay_tol;
    const double dt = tau / steps;
    auto record = [&rec, s_nodes](const KineticState& s) {
        Moments mom = moments(s);
        EnergyReport en = energy(s);
        double p = 0.0;
        for (int i = 0; i < s.ny; ++i)
            p += ((i == 0 || i == s.ny - 1) ? 0.5 : 1.0) * s.dy() *
                 mom.m[static_cast<std::size_t>(i)];
        rec.times.push_back(s.time);
        rec.mass.push_back(en.mass);
        rec.momentum.push_back(p);
        rec.energy_total.push_back(en.total);
        rec.s_field.push_back(interaction_tensor(mom.rho, s.length, s.kernel, s_nodes));
        rec.snapshots.push_back(std::move(mom));
    };
    record(state);
    for (int k = 0; k < steps; ++k) {
        advance(state, dt);
        record(state);
    }
    rec.clipped_mass = state.clipped_mass;
    rec.nv = state.nv;
    rec.final_f = std::move(state.f);
    auto face_trace = [&rec](const Moments& mom) {
        double t = 0.0;
        const double dy = 2.0 * rec.length / (rec.ny - 1);
        for (int i = 0; i < rec.ny; ++i)
            t += ((i == 0 || i == rec.ny - 1) ? 0.5 : 1.0) * dy *
                 std::hypot(mom.rho[static_cast<std::size_t>(i)], mom.m[static_cast<std::size_t>(i)]);
        return t;
    };
    rec.trace_start = face_trace(rec.snapshots.front());
    rec.trace_end = face_trace(rec.snapshots.back());
    return rec;
}

// Space-time tensor of the run on the matching slab grid. The PSD flag
// reflects an eigenvalue scan: rho (p2 + S) >= m^2 holds up to quadrature
// error by Cauchy-Schwarz in v once S >= 0.
inline TensorField assemble_T(const RunRecord& rec, double psd_tol = 1e-9) {
    Geometry g = Geometry::slab(rec.tau, rec.steps + 1, rec.length, rec.ny, rec.decay_tol);
    TensorField field;
    field.geom = g;
    field.provenance = "kinetic moments + interaction tensor";
    field.values.assign(static_cast<std::size_t>(g.node_count()), SymMatrix(2));
    double scale = 0.0, min_eig = 0.0;
    for (int it = 0; it <= rec.steps; ++it) {
        const Moments& mom = rec.snapshots[static_cast<std::size_t>(it)];
        const std::vector<double>& sf = rec.s_field[static_cast<std::size_t>(it)];
        for (int iy = 0; iy < rec.ny; ++iy) {
            auto yy = static_cast<std::size_t>(iy);
            SymMatrix t(2);
            t.at(0, 0) = mom.rho[yy];
            t.at(0, 1) = mom.m[yy];
            t.at(1, 1) = mom.p2[yy] + sf[yy];
            min_eig = std::min(min_eig, t.min_eigenvalue());
            scale = std::max(scale, t.trace());
            field.values[static_cast<std::size_t>(g.slab_node(it, iy))] = t;
        }
    }
    field.flagged_dpt = min_eig >= -psd_tol * (1.0 + scale);
    field.flagged_divfree = false; // only true at scheme order; see the divergence report
    return field;
}

struct VlasovSlabReport {
    InequalityReport inequality;
    double rho_s_integral = 0.0; // integral of rho S, the certified lower bound
};

// Slab inequality for the assembled run, plus the certified lower bound
// integrand rho S <= det T specialized to one space dimension.
inline VlasovSlabReport slab_estimate(const RunRecord& rec) {
    TensorField field = assemble_T(rec);
    VlasovSlabReport rep;
    rep.inequality = check_slab(field);
    const Geometry& g = field.geom;
    for (int it = 0; it <= rec.steps; ++it)
        for (int iy = 0; iy < rec.ny; ++iy) {
            double w = g.node_weight(g.slab_node(it, iy));
            rep.rho_s_integral += w * rec.snapshots[static_cast<std::size_t>(it)].rho[static_cast<std::size_t>(iy)] *
                                  rec.s_field[static_cast<std::size_t>(it)][static_cast<std::size_t>(iy)];
        }
    return rep;
}

} // namespace dpt
