#pragma once

// Grid-sampled symmetric tensor fields and the reductions every inequality
// checker consumes: discrete row-wise divergence, boundary trace masses, and
// L1 mass norms. Torus derivatives are spectral; ball and slab use 3-point
// finite differences (one-sided at the ends of each line).

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpt/errors.hpp"
#include "dpt/geometry.hpp"
#include "dpt/spectral.hpp"
#include "dpt/symmatrix.hpp"

namespace dpt {

struct TensorField {
    Geometry geom;
    std::vector<SymMatrix> values; // one per node, geometry order
    std::string provenance;
    bool flagged_dpt = false;      // claimed PSD everywhere
    bool flagged_divfree = false;  // claimed divergence-free

    const SymMatrix& at(int node) const { return values[static_cast<std::size_t>(node)]; }
    SymMatrix& at(int node) { return values[static_cast<std::size_t>(node)]; }
};

inline TensorField sample_field(const Geometry& g,
                                const std::function<SymMatrix(const double*)>& fn,
                                std::string provenance) {
    TensorField f;
    f.geom = g;
    f.provenance = std::move(provenance);
    f.values.reserve(static_cast<std::size_t>(g.node_count()));
    double x[6];
    for (int i = 0; i < g.node_count(); ++i) {
        g.node_position(i, x);
        f.values.push_back(fn(x));
    }
    return f;
}

inline TensorField constant_field(const Geometry& g, const SymMatrix& a, std::string provenance) {
    TensorField f;
    f.geom = g;
    f.provenance = std::move(provenance);
    f.values.assign(static_cast<std::size_t>(g.node_count()), a);
    f.flagged_divfree = true;
    return f;
}

// Minimum eigenvalue over all nodes; the PSD flag is honest when this is
// above -psd_tol relative to the field scale.
inline double min_eigenvalue(const TensorField& f) {
    double worst = 0.0;
    bool first = true;
    for (const SymMatrix& a : f.values) {
        EigenSystem es = a.eigen_system();
        double lo = es.values[0];
        if (first || lo < worst) worst = lo;
        first = false;
    }
    return worst;
}

struct DivergenceReport {
    std::vector<double> field; // node-major, stride dim
    double l1_norm = 0.0;      // weighted integral of |Div A| over interior nodes
    double linf_norm = 0.0;    // max |Div A| over interior nodes
};

namespace detail {

// Scalar lattice of one tensor component across all nodes.
inline std::vector<double> component_lattice(const TensorField& f, int i, int j) {
    std::vector<double> c(f.values.size());
    for (std::size_t n = 0; n < f.values.size(); ++n) c[n] = f.values[n](i, j);
    return c;
}

inline void divergence_torus(const TensorField& f, DivergenceReport& rep) {
    const Geometry& g = f.geom;
    const int d = g.dim();
    const int n = g.node_count();
    std::vector<int> dims(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) dims[static_cast<std::size_t>(a)] = g.axis_res(a);
    std::vector<std::vector<double>> dmat(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a)
        dmat[static_cast<std::size_t>(a)] = fourier_diff_matrix(g.axis_res(a), g.axis_period(a));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            std::vector<double> deriv =
                diff_along_axis(component_lattice(f, i, j), dims, j, dmat[static_cast<std::size_t>(j)]);
            for (int node = 0; node < n; ++node)
                rep.field[static_cast<std::size_t>(node * d + i)] += deriv[static_cast<std::size_t>(node)];
        }
    }
}

// Ball: partial_j f = e_j d_r f + (1/r) (surface gradient f)_j on the polar
// product grid. Radial and polar lines use 3-point stencils; the azimuth is
// spectral.
inline void divergence_ball(const TensorField& f, DivergenceReport& rep) {
    const Geometry& g = f.geom;
    const int d = g.dim();
    if (d != 2 && d != 3) throw DimensionError("ball divergence supports d = 2 and 3");
    const int nrad = g.radial_count();
    const int nq = g.sphere_count();
    std::vector<double> rs(static_cast<std::size_t>(nrad));
    for (int ir = 0; ir < nrad; ++ir) rs[static_cast<std::size_t>(ir)] = g.radius_of(ir);

    const int nphi = d == 2 ? nq : 2 * g.sphere_resolution();
    const int nu = d == 2 ? 1 : g.sphere_resolution();
    std::vector<double> dphi = fourier_diff_matrix(nphi, 2.0 * pi);
    // Polar lines are differentiated in theta, where tensor components are
    // analytic across the poles; in u = cos(theta) they are not smooth.
    std::vector<double> thetas;
    if (d == 3) {
        Rule1D urule = gauss_legendre(g.sphere_resolution());
        thetas.resize(static_cast<std::size_t>(nu));
        for (int iu = 0; iu < nu; ++iu)
            thetas[static_cast<std::size_t>(iu)] = std::acos(urule.nodes[static_cast<std::size_t>(iu)]);
    }

    std::vector<double> dr(static_cast<std::size_t>(g.node_count()));
    std::vector<double> du(static_cast<std::size_t>(g.node_count()), 0.0);
    std::vector<double> dph(static_cast<std::size_t>(g.node_count()));
    std::vector<double> line, dline;

    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            std::vector<double> comp = component_lattice(f, i, j);
            // radial derivative along each direction
            line.resize(static_cast<std::size_t>(nrad));
            for (int iq = 0; iq < nq; ++iq) {
                for (int ir = 0; ir < nrad; ++ir)
                    line[static_cast<std::size_t>(ir)] = comp[static_cast<std::size_t>(g.ball_node(ir, iq))];
                dline = diff_nonuniform(rs, line);
                for (int ir = 0; ir < nrad; ++ir)
                    dr[static_cast<std::size_t>(g.ball_node(ir, iq))] = dline[static_cast<std::size_t>(ir)];
            }
            // azimuthal derivative along each (r, u) circle
            line.resize(static_cast<std::size_t>(nphi));
            dline.resize(static_cast<std::size_t>(nphi));
            for (int ir = 0; ir < nrad; ++ir) {
                for (int iu = 0; iu < nu; ++iu) {
                    for (int ip = 0; ip < nphi; ++ip)
                        line[static_cast<std::size_t>(ip)] =
                            comp[static_cast<std::size_t>(g.ball_node(ir, iu * nphi + ip))];
                    apply_diff_matrix(dphi, line.data(), dline.data(), nphi);
                    for (int ip = 0; ip < nphi; ++ip)
                        dph[static_cast<std::size_t>(g.ball_node(ir, iu * nphi + ip))] =
                            dline[static_cast<std::size_t>(ip)];
                }
            }
            // polar derivative (d = 3) along each (r, phi) arc
            if (d == 3) {
                line.resize(static_cast<std::size_t>(nu));
                for (int ir = 0; ir < nrad; ++ir) {
                    for (int ip = 0; ip < nphi; ++ip) {
                        for (int iu = 0; iu < nu; ++iu)
                            line[static_cast<std::size_t>(iu)] =
                                comp[static_cast<std::size_t>(g.ball_node(ir, iu * nphi + ip))];
                        dline = diff_nonuniform(thetas, line);
                        for (int iu = 0; iu < nu; ++iu)
                            du[static_cast<std::size_t>(g.ball_node(ir, iu * nphi + ip))] =
                                dline[static_cast<std::size_t>(iu)];
                    }
                }
            }
            // assemble partial_j A_ij into row i, and partial_i A_ij into row j
            for (int node = 0; node < g.node_count(); ++node) {
                int iq = node % nq;
                double r = g.radius_of(node / nq);
                const double* e = g.sphere().point(iq);
                double grad[3] = {0.0, 0.0, 0.0};
                if (d == 2) {
                    // surface gradient = tangent * dphi
                    grad[0] = -e[1] * dph[static_cast<std::size_t>(node)];
                    grad[1] = e[0] * dph[static_cast<std::size_t>(node)];
                } else {
                    double u = e[2];
                    double sn = std::sqrt(std::max(1e-300, 1.0 - u * u));
                    double cphi = e[0] / sn, sphi = e[1] / sn;
                    double dtheta = du[static_cast<std::size_t>(node)];
                    double dphi_over_sin = dph[static_cast<std::size_t>(node)] / sn;
                    // theta-hat and phi-hat components
                    grad[0] = u * cphi * dtheta - sphi * dphi_over_sin;
                    grad[1] = u * sphi * dtheta + cphi * dphi_over_sin;
                    grad[2] = -sn * dtheta;
                }
                for (int a = 0; a < d; ++a)
                    grad[a] = e[a] * dr[static_cast<std::size_t>(node)] + grad[a] / r;
                rep.field[static_cast<std::size_t>(node * d + i)] += grad[j];
                if (i != j) rep.field[static_cast<std::size_t>(node * d + j)] += grad[i];
            }
        }
    }
}

inline void divergence_slab(const TensorField& f, DivergenceReport& rep) {
    const Geometry& g = f.geom;
    const int nt = g.time_count(), ny = g.space_count();
    std::vector<double> ts(static_cast<std::size_t>(nt)), ys(static_cast<std::size_t>(ny));
    for (int it = 0; it < nt; ++it) ts[static_cast<std::size_t>(it)] = g.time_of(it);
    for (int iy = 0; iy < ny; ++iy) ys[static_cast<std::size_t>(iy)] = g.space_of(iy);
    std::vector<double> line, dline;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            std::vector<double> comp = component_lattice(f, i, j);
            if (j == 0) { // time derivative along columns
                line.resize(static_cast<std::size_t>(nt));
                for (int iy = 0; iy < ny; ++iy) {
                    for (int it = 0; it < nt; ++it)
                        line[static_cast<std::size_t>(it)] = comp[static_cast<std::size_t>(g.slab_node(it, iy))];
                    dline = diff_nonuniform(ts, line);
                    for (int it = 0; it < nt; ++it)
                        rep.field[static_cast<std::size_t>(g.slab_node(it, iy) * 2 + i)] +=
                            dline[static_cast<std::size_t>(it)];
                }
            } else { // space derivative along rows
                line.resize(static_cast<std::size_t>(ny));
                for (int it = 0; it < nt; ++it) {
                    for (int iy = 0; iy < ny; ++iy)
                        line[static_cast<std::size_t>(iy)] = comp[static_cast<std::size_t>(g.slab_node(it, iy))];
                    dline = diff_nonuniform(ys, line);
                    for (int iy = 0; iy < ny; ++iy)
                        rep.field[static_cast<std::size_t>(g.slab_node(it, iy) * 2 + i)] +=
                            dline[static_cast<std::size_t>(iy)];
                }
            }
        }
    }
}

} // namespace detail

// Row-wise divergence at every node; norms are taken over interior nodes
// (weighted L1 and pointwise max of the Euclidean length).
inline DivergenceReport discrete_divergence(const TensorField& f) {
    const Geometry& g = f.geom;
    const int d = g.dim();
    DivergenceReport rep;
    rep.field.assign(static_cast<std::size_t>(g.node_count() * d), 0.0);
    switch (g.kind()) {
        case GeometryKind::torus: detail::divergence_torus(f, rep); break;
        case GeometryKind::ball: detail::divergence_ball(f, rep); break;
        case GeometryKind::slab: detail::divergence_slab(f, rep); break;
    }
    for (int node = 0; node < g.node_count(); ++node) {
        if (g.is_boundary(node)) continue;
        double s = 0.0;
        for (int a = 0; a < d; ++a) {
            double v = rep.field[static_cast<std::size_t>(node * d + a)];
            s += v * v;
        }
        s = std::sqrt(s);
        rep.l1_norm += g.node_weight(node) * s;
        rep.linf_norm = std::max(rep.linf_norm, s);
    }
    return rep;
}

// Integral of |A n| over a boundary component by surface quadrature.
inline double normal_trace_mass(const TensorField& f, BoundaryFace face) {
    const Geometry& g = f.geom;
    if (g.kind() == GeometryKind::torus) throw DimensionError("torus has no boundary");
    const int d = g.dim();
    double total = 0.0;
    if (g.kind() == GeometryKind::ball) {
        if (face != BoundaryFace::sphere) throw DimensionError("ball boundary is the sphere");
        const int ir = g.radial_count() - 1;
        double rpow = std::pow(g.ball_radius(), d - 1);
        for (int iq = 0; iq < g.sphere_count(); ++iq) {
            const double* e = g.sphere().point(iq);
            const SymMatrix& a = f.at(g.ball_node(ir, iq));
            double s = 0.0;
            for (int i = 0; i < d; ++i) {
                double row = 0.0;
                for (int j = 0; j < d; ++j) row += a(i, j) * e[j];
                s += row * row;
            }
            total += g.sphere().weights[static_cast<std::size_t>(iq)] * rpow * std::sqrt(s);
        }
        return total;
    }
    // slab: |A e_t| integrated over the selected face
    int it = face == BoundaryFace::slab_bottom ? 0 : g.time_count() - 1;
    if (face == BoundaryFace::sphere) throw DimensionError("slab faces are top and bottom");
    for (int iy = 0; iy < g.space_count(); ++iy) {
        const SymMatrix& a = f.at(g.slab_node(it, iy));
        double wy = (iy == 0 || iy == g.space_count() - 1) ? 0.5 : 1.0;
        total += wy * g.space_step() * std::hypot(a(0, 0), a(0, 1));
    }
    return total;
}

// L1 norm of the Frobenius length over the domain.
inline double mass_norm(const TensorField& f) {
    double total = 0.0;
    for (int i = 0; i < f.geom.node_count(); ++i)
        total += f.geom.node_weight(i) * f.at(i).frobenius_norm();
    return total;
}

// Quadrature average of the field (the mean tensor of the periodic theorem).
inline SymMatrix mean_tensor(const TensorField& f) {
    SymMatrix m(f.geom.dim());
    double vol = 0.0;
    for (int i = 0; i < f.geom.node_count(); ++i) {
        double w = f.geom.node_weight(i);
        vol += w;
        for (int a = 0; a < f.geom.dim(); ++a)
            for (int b = a; b < f.geom.dim(); ++b) m.at(a, b) += w * f.at(i)(a, b);
    }
    m *= 1.0 / vol;
    return m;
}

// Integral of (det A)^exponent with PSD clamping at each node.
inline double det_power_integral(const TensorField& f, double exponent) {
    double total = 0.0;
    for (int i = 0; i < f.geom.node_count(); ++i) {
        double w = f.geom.node_weight(i);
        if (w == 0.0) continue;
        total += w * detroot(f.at(i), exponent);
    }
    return total;
}

// Largest |A| entry on the slab's y-box edges; the decay contract for slab
// fields requires this below geom.decay_tol().
inline double slab_edge_magnitude(const TensorField& f) {
    const Geometry& g = f.geom;
    if (g.kind() != GeometryKind::slab) throw DimensionError("edge magnitude is a slab check");
    double worst = 0.0;
    for (int it = 0; it < g.time_count(); ++it)
        for (int iy : {0, g.space_count() - 1})
            worst = std::max(worst, f.at(g.slab_node(it, iy)).frobenius_norm());
    return worst;
}

inline void require_slab_decay(const TensorField& f) {
    double m = slab_edge_magnitude(f);
    if (m > f.geom.decay_tol())
        throw DecayError("slab field does not decay at the y-box edges: " + std::to_string(m));
}

// ---- serialization: JSON header + flat little-endian doubles

inline nlohmann::json geometry_to_json(const Geometry& g) {
    nlohmann::json j;
    j["dim"] = g.dim();
    switch (g.kind()) {
        case GeometryKind::torus: {
            j["kind"] = "torus";
            j["periods"] = std::vector<double>();
            j["res"] = std::vector<int>();
            for (int a = 0; a < g.axis_count(); ++a) {
                j["periods"].push_back(g.axis_period(a));
                j["res"].push_back(g.axis_res(a));
            }
            break;
        }
        case GeometryKind::ball:
            j["kind"] = "ball";
            j["radius"] = g.ball_radius();
            j["radial_nodes"] = g.radial_count() - 1;
            j["sphere_resolution"] = g.sphere_resolution();
            break;
        case GeometryKind::slab:
            j["kind"] = "slab";
            j["tau"] = g.slab_tau();
            j["time_nodes"] = g.time_count();
            j["ybox"] = g.slab_ybox();
            j["space_nodes"] = g.space_count();
            j["decay_tol"] = g.decay_tol();
            break;
    }
    return j;
}

inline Geometry geometry_from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind");
    if (kind == "torus")
        return Geometry::torus(j.at("periods").get<std::vector<double>>(),
                               j.at("res").get<std::vector<int>>());
    if (kind == "ball")
        return Geometry::ball(j.at("dim").get<int>(), j.at("radius").get<double>(),
                              j.at("radial_nodes").get<int>(), j.at("sphere_resolution").get<int>());
    if (kind == "slab")
        return Geometry::slab(j.at("tau").get<double>(), j.at("time_nodes").get<int>(),
                              j.at("ybox").get<double>(), j.at("space_nodes").get<int>(),
                              j.value("decay_tol", 1e-8));
    throw ConfigError("unknown geometry kind " + kind);
}

// Layout: magic "DPTFLD1\n", uint64 header length, JSON header, then packed
// upper-triangle doubles per node.
inline void save_field(const TensorField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path + " for writing");
    nlohmann::json header;
    header["geometry"] = geometry_to_json(f.geom);
    header["provenance"] = f.provenance;
    header["flagged_dpt"] = f.flagged_dpt;
    header["flagged_divfree"] = f.flagged_divfree;
    header["packed_size"] = f.geom.dim() * (f.geom.dim() + 1) / 2;
    std::string htext = header.dump();
    out.write("DPTFLD1\n", 8);
    std::uint64_t hlen = htext.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof hlen);
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    const int d = f.geom.dim();
    for (const SymMatrix& a : f.values)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double v = a(i, j);
                out.write(reinterpret_cast<const char*>(&v), sizeof v);
            }
    if (!out) throw ConfigError("write failed for " + path);
}

inline TensorField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "DPTFLD1\n", 8) != 0)
        throw ConfigError("not a tensor field file: " + path);
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof hlen);
    std::string htext(hlen, '\0');
    in.read(htext.data(), static_cast<std::streamsize>(hlen));
    nlohmann::json header = nlohmann::json::parse(htext);
    TensorField f;
    f.geom = geometry_from_json(header.at("geometry"));
    f.provenance = header.value("provenance", "");
    f.flagged_dpt = header.value("flagged_dpt", false);
    f.flagged_divfree = header.value("flagged_divfree", false);
    const int d = f.geom.dim();
    f.values.assign(static_cast<std::size_t>(f.geom.node_count()), SymMatrix(d));
    for (SymMatrix& a : f.values)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double v = 0.0;
                in.read(reinterpret_cast<char*>(&v), sizeof v);
                a.at(i, j) = v;
            }
    if (!in) throw ConfigError("truncated tensor field file: " + path);
    return f;
}

} // namespace dpt
