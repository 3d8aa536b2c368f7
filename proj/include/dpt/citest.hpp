#pragma once

// The three compensated-integrability checkers (periodic, bounded domain,
// space-time slab) with their sharp constants, plus the Piola generator that
// produces exact divergence-free PSD fields on the torus: the cofactor matrix
// of a Hessian is row-wise divergence-free, so any smooth convex potential
// yields a test field, and these fields saturate the periodic inequality.

#include <cmath>
#include <string>
#include <vector>

#include "dpt/errors.hpp"
#include "dpt/geometry.hpp"
#include "dpt/quadrature.hpp"
#include "dpt/symmatrix.hpp"
#include "dpt/tensorfield.hpp"

namespace dpt {

// One trigonometric term amp * sin(kappa . x + phase) of a periodic
// potential, with kappa_a = 2 pi k_a / period_a.
struct TrigMode {
    std::vector<int> k;
    double amp = 0.0;
    double phase = 0.0;
};

// theta(x) = (1/2) x^T s0 x + sum of modes; the field is cof(Hessian theta).
struct PotentialSpec {
    SymMatrix s0;
    std::vector<TrigMode> modes;
};

inline SymMatrix potential_hessian(const PotentialSpec& spec, const Geometry& g, const double* x) {
    const int d = g.dim();
    if (spec.s0.dim() != d) throw DimensionError("potential s0 dimension mismatch");
    SymMatrix h = spec.s0;
    for (const TrigMode& mode : spec.modes) {
        if (static_cast<int>(mode.k.size()) != d)
            throw DimensionError("trig mode wave vector needs one entry per axis");
        double kappa[6];
        double arg = mode.phase;
        for (int a = 0; a < d; ++a) {
            kappa[a] = 2.0 * pi * mode.k[static_cast<std::size_t>(a)] / g.axis_period(a);
            arg += kappa[a] * x[a];
        }
        double s = mode.amp * std::sin(arg);
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) h.at(i, j) -= s * kappa[i] * kappa[j];
    }
    return h;
}

// Sample A = cof(D^2 theta) on the torus. The Hessian must be positive
// definite at every node; the resulting field is PSD and divergence-free by
// construction (cofactors of Hessians are null Lagrangians).
inline TensorField generate_periodic_dpt(const Geometry& g, const PotentialSpec& spec) {
    if (g.kind() != GeometryKind::torus)
        throw ConfigError("the Piola generator needs a torus geometry");
    TensorField f;
    f.geom = g;
    f.provenance = "piola(cof hessian), " + std::to_string(spec.modes.size()) + " modes";
    f.values.reserve(static_cast<std::size_t>(g.node_count()));
    double x[6];
    for (int i = 0; i < g.node_count(); ++i) {
        g.node_position(i, x);
        SymMatrix h = potential_hessian(spec, g, x);
        double lo = h.min_eigenvalue();
        if (lo <= 0.0)
            throw NotConvexError("potential Hessian has eigenvalue " + std::to_string(lo) +
                                 " at a grid node; reduce mode amplitudes");
        f.values.push_back(cofactor_matrix(h));
    }
    f.flagged_dpt = true;
    f.flagged_divfree = true;
    return f;
}

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant_used = 0.0;
    double margin = 0.0; // rhs - lhs; negative means the inequality failed
    double slack = 0.0;  // numerical slack used for the holds verdict
    bool holds = false;
    std::string grid_resolution;
    std::string scheme;
};

namespace detail {

inline void finish_report(InequalityReport& rep, double scheme_err) {
    rep.margin = rep.rhs - rep.lhs;
    rep.slack = std::max(1e-6, scheme_err) * (1.0 + std::fabs(rep.rhs));
    rep.holds = rep.margin >= -rep.slack;
}

} // namespace detail

// Periodic form: the mean of (det A)^{1/(d-1)} is at most the same power of
// the determinant of the mean tensor.
inline InequalityReport check_periodic(const TensorField& f) {
    const Geometry& g = f.geom;
    if (g.kind() != GeometryKind::torus) throw ConfigError("check_periodic needs a torus field");
    const int d = g.dim();
    InequalityReport rep;
    rep.lhs = det_power_integral(f, 1.0 / (d - 1)) / g.total_volume();
    rep.rhs = detroot(mean_tensor(f), 1.0 / (d - 1));
    rep.constant_used = 1.0;
    rep.grid_resolution = g.describe();
    rep.scheme = "spectral";
    detail::finish_report(rep, 0.0);
    return rep;
}

// Bounded domain form on the ball. The boundary and divergence masses may
// come from quadrature (normal_trace_mass, discrete_divergence) or from an
// analytic formula when the field has a known closed form.
inline InequalityReport check_bounded(const TensorField& f, double div_mass, double trace_mass) {
    const Geometry& g = f.geom;
    if (g.kind() != GeometryKind::ball) throw ConfigError("check_bounded needs a ball field");
    const int d = g.dim();
    InequalityReport rep;
    rep.lhs = det_power_integral(f, 1.0 / (d - 1));
    rep.constant_used = 1.0 / (d * std::pow(sphere_area(d), 1.0 / (d - 1)));
    rep.rhs = rep.constant_used * std::pow(trace_mass + div_mass, double(d) / (d - 1));
    rep.grid_resolution = g.describe();
    rep.scheme = "gauss-radial";
    double h = g.ball_radius() / g.radial_count();
    detail::finish_report(rep, h * h);
    return rep;
}

// Slab form for one space dimension: coordinates (t, y), faces t = 0 and
// t = tau, and the field must decay below the geometry's tolerance at the
// y-box edges (the bounded-box stand-in for integrability over the line).
inline InequalityReport check_slab(const TensorField& f) {
    const Geometry& g = f.geom;
    if (g.kind() != GeometryKind::slab) throw ConfigError("check_slab needs a slab field");
    require_slab_decay(f);
    const int n = g.dim() - 1;
    InequalityReport rep;
    rep.lhs = det_power_integral(f, 1.0 / n);
    double traces = normal_trace_mass(f, BoundaryFace::slab_bottom) +
                    normal_trace_mass(f, BoundaryFace::slab_top);
    rep.constant_used = 1.0 / ((n + 1) * std::pow(sphere_area(n + 1), 1.0 / n));
    rep.rhs = rep.constant_used * std::pow(traces, 1.0 + 1.0 / n);
    rep.grid_resolution = g.describe();
    rep.scheme = "trapezoid";
    double h = std::max(g.time_step(), g.space_step());
    detail::finish_report(rep, h * h);
    return rep;
}

// Pointwise sum of two fields on the same grid; the DPT cone is convex, so
// sums of generated fields stay admissible while breaking extremality.
inline TensorField field_sum(const TensorField& a, const TensorField& b) {
    if (a.geom.node_count() != b.geom.node_count() || a.geom.dim() != b.geom.dim())
        throw DimensionError("field_sum needs matching grids");
    TensorField out = a;
    out.provenance = "sum(" + a.provenance + ", " + b.provenance + ")";
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const SymMatrix& add = b.values[i];
        for (int r = 0; r < a.geom.dim(); ++r)
            for (int c = r; c < a.geom.dim(); ++c) out.values[i].at(r, c) += add(r, c);
    }
    out.flagged_dpt = a.flagged_dpt && b.flagged_dpt;
    out.flagged_divfree = a.flagged_divfree && b.flagged_divfree;
    return out;
}

inline TensorField field_scale(const TensorField& a, double c) {
    TensorField out = a;
    for (SymMatrix& v : out.values) v *= c;
    if (c < 0.0) out.flagged_dpt = false;
    return out;
}

} // namespace dpt
