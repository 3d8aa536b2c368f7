#pragma once

// Spectral differentiation on uniform periodic grids via the closed-form
// Fourier differentiation matrix. For a band-limited sample the result is
// the exact derivative up to roundoff, which is what makes the periodic
// divergence checks sharp.

#include <cmath>
#include <vector>

#include "dpt/errors.hpp"
#include "dpt/quadrature.hpp"

namespace dpt {

// n x n differentiation matrix for period-L grids, row-major. Even n only;
// the entry formula is D_jk = (pi/L) (-1)^{j-k} cot(pi (j-k) / n) off the
// diagonal, which equals exact spectral differentiation with the Nyquist
// mode treated symmetrically.
inline std::vector<double> fourier_diff_matrix(int n, double period = 2.0 * pi) {
    if (n < 2 || n % 2 != 0) throw DimensionError("fourier_diff_matrix needs even n >= 2");
    std::vector<double> d(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    const double scale = pi / period; // (2*pi/period) * (1/2)
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            int diff = j - k;
            double sign = (diff % 2 == 0) ? 1.0 : -1.0;
            d[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] =
                sign * scale / std::tan(pi * diff / n);
        }
    }
    return d;
}

// y = D x for a single line.
inline void apply_diff_matrix(const std::vector<double>& d, const double* x, double* y, int n) {
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        const double* row = d.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(n);
        for (int k = 0; k < n; ++k) s += row[k] * x[k];
        y[j] = s;
    }
}

// Differentiate a flat row-major multi-dimensional array along one axis.
// dims lists the extent of each axis; the derivative matrix must match
// dims[axis].
inline std::vector<double> diff_along_axis(const std::vector<double>& data, const std::vector<int>& dims,
                                           int axis, const std::vector<double>& dmat) {
    const int nd = static_cast<int>(dims.size());
    if (axis < 0 || axis >= nd) throw DimensionError("diff_along_axis: axis out of range");
    const int n = dims[static_cast<std::size_t>(axis)];
    std::vector<std::size_t> stride(static_cast<std::size_t>(nd), 1);
    for (int a = nd - 2; a >= 0; --a)
        stride[static_cast<std::size_t>(a)] = stride[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(dims[static_cast<std::size_t>(a + 1)]);
    std::size_t total = stride[0] * static_cast<std::size_t>(dims[0]);
    if (data.size() != total) throw DimensionError("diff_along_axis: data size mismatch");

    std::vector<double> out(total, 0.0);
    std::vector<double> line(static_cast<std::size_t>(n)), dline(static_cast<std::size_t>(n));
    const std::size_t ax_stride = stride[static_cast<std::size_t>(axis)];
    const std::size_t n_lines = total / static_cast<std::size_t>(n);
    // Enumerate line base offsets: iterate all indices with axis index fixed at 0.
    std::vector<int> idx(static_cast<std::size_t>(nd), 0);
    for (std::size_t ln = 0; ln < n_lines; ++ln) {
        std::size_t base = 0;
        for (int a = 0; a < nd; ++a) base += static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]) * stride[static_cast<std::size_t>(a)];
        for (int k = 0; k < n; ++k) line[static_cast<std::size_t>(k)] = data[base + static_cast<std::size_t>(k) * ax_stride];
        apply_diff_matrix(dmat, line.data(), dline.data(), n);
        for (int k = 0; k < n; ++k) out[base + static_cast<std::size_t>(k) * ax_stride] = dline[static_cast<std::size_t>(k)];
        // advance mixed-radix counter skipping `axis`
        for (int a = nd - 1; a >= 0; --a) {
            if (a == axis) continue;
            if (++idx[static_cast<std::size_t>(a)] < dims[static_cast<std::size_t>(a)]) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return out;
}

// First derivative on a non-uniform grid by 3-point Lagrange stencils,
// one-sided at the ends. Second-order accurate on smoothly graded grids.
inline std::vector<double> diff_nonuniform(const std::vector<double>& x, const std::vector<double>& f) {
    const int n = static_cast<int>(x.size());
    if (n < 3) throw DimensionError("diff_nonuniform needs at least 3 nodes");
    std::vector<double> out(static_cast<std::size_t>(n));
    auto d3 = [&](int i0, int i1, int i2, int at) {
        double x0 = x[static_cast<std::size_t>(i0)], x1 = x[static_cast<std::size_t>(i1)], x2 = x[static_cast<std::size_t>(i2)];
        double f0 = f[static_cast<std::size_t>(i0)], f1 = f[static_cast<std::size_t>(i1)], f2 = f[static_cast<std::size_t>(i2)];
        double xa = x[static_cast<std::size_t>(at)];
        double w0 = (2.0 * xa - x1 - x2) / ((x0 - x1) * (x0 - x2));
        double w1 = (2.0 * xa - x0 - x2) / ((x1 - x0) * (x1 - x2));
        double w2 = (2.0 * xa - x0 - x1) / ((x2 - x0) * (x2 - x1));
        return w0 * f0 + w1 * f1 + w2 * f2;
    };
    out[0] = d3(0, 1, 2, 0);
    for (int i = 1; i < n - 1; ++i) out[static_cast<std::size_t>(i)] = d3(i - 1, i, i + 1, i);
    out[static_cast<std::size_t>(n - 1)] = d3(n - 3, n - 2, n - 1, n - 1);
    return out;
}

} // namespace dpt
