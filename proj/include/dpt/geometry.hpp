#pragma once

// Grid descriptions for the three domains fields live on: a periodic box
// (torus), a ball with a polar product grid, and a space-time slab. Each
// geometry owns its node enumeration and quadrature weights; no node is ever
// placed at the ball's origin, and the ball carries an extra zero-weight
// boundary ring at r = R so traces can be read off directly.

#include <cmath>
#include <string>
#include <vector>

#include "dpt/errors.hpp"
#include "dpt/quadrature.hpp"

namespace dpt {

enum class GeometryKind { torus, ball, slab };

enum class BoundaryFace { sphere, slab_bottom, slab_top };

class Geometry {
public:
    static Geometry torus(std::vector<double> periods, std::vector<int> res) {
        if (periods.empty() || periods.size() != res.size())
            throw ConfigError("torus needs one period per axis");
        Geometry g;
        g.kind_ = GeometryKind::torus;
        g.dim_ = static_cast<int>(periods.size());
        g.periods_ = std::move(periods);
        g.res_ = std::move(res);
        for (double p : g.periods_)
            if (!(p > 0.0)) throw ConfigError("torus periods must be positive");
        for (int r : g.res_)
            if (r < 8) throw ConfigError("grid resolutions must be at least 8");
        g.count_ = 1;
        for (int r : g.res_) g.count_ *= r;
        return g;
    }

    static Geometry ball(int dim, double radius, int radial_nodes, int sphere_resolution) {
        if (!(radius > 0.0)) throw ConfigError("ball radius must be positive");
        if (radial_nodes < 8 || sphere_resolution < 8)
            throw ConfigError("grid resolutions must be at least 8");
        if (dim == 2 && sphere_resolution % 2 != 0)
            throw ConfigError("d = 2 ball needs an even angular resolution");
        Geometry g;
        g.kind_ = GeometryKind::ball;
        g.dim_ = dim;
        g.radius_ = radius;
        g.radial_ = gauss_legendre(radial_nodes, 0.0, radius);
        g.sphere_ = sphere_rule(dim, sphere_resolution);
        g.sphere_resolution_ = sphere_resolution;
        g.count_ = (radial_nodes + 1) * g.sphere_.size();
        return g;
    }

    // d = 1 + n with n = 1: coordinates are (t, y), t in [0, tau],
    // y in [-ybox, ybox]. Both faces t = 0 and t = tau are grid slices.
    static Geometry slab(double tau, int time_nodes, double ybox, int space_nodes,
                         double decay_tol = 1e-8) {
        if (!(tau > 0.0) || !(ybox > 0.0)) throw ConfigError("slab extents must be positive");
        if (time_nodes < 8 || space_nodes < 8)
            throw ConfigError("grid resolutions must be at least 8");
        Geometry g;
        g.kind_ = GeometryKind::slab;
        g.dim_ = 2;
        g.tau_ = tau;
        g.ybox_ = ybox;
        g.time_nodes_ = time_nodes;
        g.space_nodes_ = space_nodes;
        g.decay_tol_ = decay_tol;
        g.count_ = time_nodes * space_nodes;
        return g;
    }

    GeometryKind kind() const { return kind_; }
    int dim() const { return dim_; }
    int node_count() const { return count_; }

    // torus accessors
    int axis_count() const { return static_cast<int>(res_.size()); }
    int axis_res(int a) const { return res_[static_cast<std::size_t>(a)]; }
    double axis_period(int a) const { return periods_[static_cast<std::size_t>(a)]; }
    const std::vector<int>& torus_res() const { return res_; }

    // ball accessors: radial index nr() is the zero-weight boundary ring.
    int radial_count() const { return radial_.size() + 1; }
    int sphere_count() const { return sphere_.size(); }
    int sphere_resolution() const { return sphere_resolution_; }
    const SphereRule& sphere() const { return sphere_; }
    double ball_radius() const { return radius_; }
    double radius_of(int ir) const {
        return ir < radial_.size() ? radial_.nodes[static_cast<std::size_t>(ir)] : radius_;
    }
    double radial_weight(int ir) const {
        return ir < radial_.size() ? radial_.weights[static_cast<std::size_t>(ir)] : 0.0;
    }
    int ball_node(int ir, int iq) const { return ir * sphere_.size() + iq; }

    // slab accessors
    double slab_tau() const { return tau_; }
    double slab_ybox() const { return ybox_; }
    double decay_tol() const { return decay_tol_; }
    int time_count() const { return time_nodes_; }
    int space_count() const { return space_nodes_; }
    double time_of(int it) const { return tau_ * it / (time_nodes_ - 1); }
    double space_of(int iy) const { return -ybox_ + 2.0 * ybox_ * iy / (space_nodes_ - 1); }
    double time_step() const { return tau_ / (time_nodes_ - 1); }
    double space_step() const { return 2.0 * ybox_ / (space_nodes_ - 1); }
    int slab_node(int it, int iy) const { return it * space_nodes_ + iy; }

    // Coordinates of node i, written into x[0..dim).
    void node_position(int i, double* x) const {
        switch (kind_) {
            case GeometryKind::torus: {
                int rest = i;
                for (int a = dim_ - 1; a >= 0; --a) {
                    int r = res_[static_cast<std::size_t>(a)];
                    int k = rest % r;
                    rest /= r;
                    x[a] = periods_[static_cast<std::size_t>(a)] * k / r;
                }
                return;
            }
            case GeometryKind::ball: {
                int iq = i % sphere_.size();
                int ir = i / sphere_.size();
                double r = radius_of(ir);
                const double* e = sphere_.point(iq);
                for (int a = 0; a < dim_; ++a) x[a] = r * e[a];
                return;
            }
            case GeometryKind::slab: {
                x[0] = time_of(i / space_nodes_);
                x[1] = space_of(i % space_nodes_);
                return;
            }
        }
    }

    // Volume quadrature weight of node i (zero on the ball's boundary ring).
    double node_weight(int i) const {
        switch (kind_) {
            case GeometryKind::torus: {
                double w = 1.0;
                for (int a = 0; a < dim_; ++a)
                    w *= periods_[static_cast<std::size_t>(a)] / res_[static_cast<std::size_t>(a)];
                return w;
            }
            case GeometryKind::ball: {
                int iq = i % sphere_.size();
                int ir = i / sphere_.size();
                if (ir >= radial_.size()) return 0.0;
                double r = radius_of(ir);
                return radial_weight(ir) * std::pow(r, dim_ - 1) * sphere_.weights[static_cast<std::size_t>(iq)];
            }
            case GeometryKind::slab: {
                int it = i / space_nodes_;
                int iy = i % space_nodes_;
                double wt = (it == 0 || it == time_nodes_ - 1) ? 0.5 : 1.0;
                double wy = (iy == 0 || iy == space_nodes_ - 1) ? 0.5 : 1.0;
                return wt * time_step() * wy * space_step();
            }
        }
        return 0.0;
    }

    double total_volume() const {
        double v = 0.0;
        for (int i = 0; i < count_; ++i) v += node_weight(i);
        return v;
    }

    // True when the node lies on the domain boundary (ball ring, slab faces
    // or y-box edges). Torus nodes are all interior.
    bool is_boundary(int i) const {
        switch (kind_) {
            case GeometryKind::torus:
                return false;
            case GeometryKind::ball:
                return i / sphere_.size() >= radial_.size();
            case GeometryKind::slab: {
                int it = i / space_nodes_;
                int iy = i % space_nodes_;
                return it == 0 || it == time_nodes_ - 1 || iy == 0 || iy == space_nodes_ - 1;
            }
        }
        return false;
    }

    std::string describe() const {
        switch (kind_) {
            case GeometryKind::torus: {
                std::string s = "torus";
                for (std::size_t a = 0; a < res_.size(); ++a)
                    s += (a == 0 ? " " : "x") + std::to_string(res_[a]);
                return s;
            }
            case GeometryKind::ball:
                return "ball d=" + std::to_string(dim_) + " r=" + std::to_string(radius_) +
                       " nr=" + std::to_string(radial_.size()) +
                       " sres=" + std::to_string(sphere_resolution_);
            case GeometryKind::slab:
                return "slab nt=" + std::to_string(time_nodes_) + " ny=" + std::to_string(space_nodes_);
        }
        return "";
    }

    // A default-constructed geometry has zero nodes; real instances come
    // from the factories above.
    Geometry() = default;

private:
    GeometryKind kind_ = GeometryKind::torus;
    int dim_ = 0;
    int count_ = 0;
    // torus
    std::vector<double> periods_;
    std::vector<int> res_;
    // ball
    double radius_ = 1.0;
    Rule1D radial_;
    SphereRule sphere_;
    int sphere_resolution_ = 0;
    // slab
    double tau_ = 0.0, ybox_ = 0.0, decay_tol_ = 1e-8;
    int time_nodes_ = 0, space_nodes_ = 0;
};

} // namespace dpt
