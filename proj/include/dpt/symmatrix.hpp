#pragma once

// Dense symmetric matrices of small dimension (2..6) over the reals, with a
// self-contained eigensolver: Householder tridiagonalization followed by QL
// iteration with implicit shifts. Every spectral quantity downstream
// (determinant roots, elementary symmetric functions, cone membership) is
// derived from the eigenvalues produced here, so the clamping policy near
// the cone boundary lives in one place.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "dpt/errors.hpp"
#include "dpt/rng.hpp"

namespace dpt {

class SymMatrix;

// Eigenvalues ascending; column j of `vectors` is the unit eigenvector for
// values[j], so A = V diag(values) V^T.
struct EigenSystem {
    int dim = 0;
    std::array<double, 6> values{};
    std::array<double, 36> vectors{}; // row-major, vectors[i*dim+j] = component i of eigenvector j

    double vec(int i, int j) const { return vectors[static_cast<std::size_t>(i * dim + j)]; }
};

class SymMatrix {
public:
    static constexpr int max_dim = 6;

    SymMatrix() : dim_(0) { coeff_.fill(0.0); }

    explicit SymMatrix(int dim) : dim_(dim) {
        check_dim(dim);
        coeff_.fill(0.0);
    }

    static SymMatrix identity(int dim) {
        SymMatrix a(dim);
        for (int i = 0; i < dim; ++i) a.at(i, i) = 1.0;
        return a;
    }

    static SymMatrix diagonal(std::span<const double> d) {
        SymMatrix a(static_cast<int>(d.size()));
        for (int i = 0; i < a.dim_; ++i) a.at(i, i) = d[static_cast<std::size_t>(i)];
        return a;
    }

    static SymMatrix diagonal(std::initializer_list<double> d) {
        return diagonal(std::span<const double>(d.begin(), d.size()));
    }

    // v v^T (rank one, PSD).
    static SymMatrix rank_one(std::span<const double> v) {
        SymMatrix a(static_cast<int>(v.size()));
        for (int i = 0; i < a.dim_; ++i)
            for (int j = i; j < a.dim_; ++j)
                a.at(i, j) = v[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
        return a;
    }

    static SymMatrix rank_one(std::initializer_list<double> v) {
        return rank_one(std::span<const double>(v.begin(), v.size()));
    }

    int dim() const { return dim_; }

    // Symmetric element access; (i, j) and (j, i) address the same slot.
    double operator()(int i, int j) const { return coeff_[slot(i, j)]; }
    double& at(int i, int j) { return coeff_[slot(i, j)]; }

    SymMatrix& operator+=(const SymMatrix& o) {
        for (std::size_t k = 0; k < packed_size(); ++k) coeff_[k] += o.coeff_[k];
        return *this;
    }
    SymMatrix& operator-=(const SymMatrix& o) {
        for (std::size_t k = 0; k < packed_size(); ++k) coeff_[k] -= o.coeff_[k];
        return *this;
    }
    SymMatrix& operator*=(double s) {
        for (std::size_t k = 0; k < packed_size(); ++k) coeff_[k] *= s;
        return *this;
    }
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
    friend SymMatrix operator*(SymMatrix a, double s) { return a *= s; }
    friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) s += (*this)(i, j) * (*this)(i, j);
        return std::sqrt(s);
    }

    // Cone-membership tolerance: absolute floor plus relative scale.
    double psd_tolerance() const { return 1e-10 * (1.0 + frobenius_norm()); }

    std::vector<double> apply(std::span<const double> v) const {
        std::vector<double> w(static_cast<std::size_t>(dim_), 0.0);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) w[static_cast<std::size_t>(i)] += (*this)(i, j) * v[static_cast<std::size_t>(j)];
        return w;
    }

    double quad_form(std::span<const double> v) const {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) s += v[static_cast<std::size_t>(i)] * (*this)(i, j) * v[static_cast<std::size_t>(j)];
        return s;
    }

    EigenSystem eigen_system() const;

    std::vector<double> eigenvalues() const {
        EigenSystem es = eigen_system();
        return std::vector<double>(es.values.begin(), es.values.begin() + dim_);
    }

    double min_eigenvalue() const { return eigen_system().values[0]; }

    bool is_psd() const { return is_psd(psd_tolerance()); }
    bool is_psd(double tol) const { return min_eigenvalue() >= -tol; }

    // Signed determinant (product of eigenvalues, no clamping).
    double determinant() const {
        EigenSystem es = eigen_system();
        double p = 1.0;
        for (int i = 0; i < dim_; ++i) p *= es.values[static_cast<std::size_t>(i)];
        return p;
    }

private:
    static void check_dim(int dim) {
        if (dim < 1 || dim > max_dim)
            throw DimensionError("SymMatrix dimension must be in [1, 6], got " + std::to_string(dim));
    }

    std::size_t packed_size() const { return static_cast<std::size_t>(dim_ * (dim_ + 1) / 2); }

    // Upper triangle, row-major: (0,0),(0,1),...,(0,d-1),(1,1),...
    std::size_t slot(int i, int j) const {
        if (i > j) std::swap(i, j);
        return static_cast<std::size_t>(i * dim_ - i * (i - 1) / 2 + (j - i));
    }

    int dim_;
    std::array<double, 21> coeff_;
};

namespace detail {

inline double hypot2(double a, double b) { return std::hypot(a, b); }

// Householder reduction of a full symmetric matrix (row-major in z) to
// tridiagonal form; transformations accumulate in z so that the later QL
// sweep can deliver eigenvectors of the original matrix.
inline void tridiagonalize(int n, double* z, double* d, double* e) {
    for (int i = n - 1; i > 0; --i) {
        int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k < i; ++k) scale += std::fabs(z[i * n + k]);
            if (scale == 0.0) {
                e[i] = z[i * n + l];
            } else {
                for (int k = 0; k < i; ++k) {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                double f = z[i * n + l];
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                f = 0.0;
                for (int j = 0; j < i; ++j) {
                    z[j * n + i] = z[i * n + j] / h;
                    g = 0.0;
                    for (int k = 0; k < j + 1; ++k) g += z[j * n + k] * z[i * n + k];
                    for (int k = j + 1; k < i; ++k) g += z[k * n + j] * z[i * n + k];
                    e[j] = g / h;
                    f += e[j] * z[i * n + j];
                }
                double hh = f / (h + h);
                for (int j = 0; j < i; ++j) {
                    f = z[i * n + j];
                    double gj = e[j] - hh * f;
                    e[j] = gj;
                    for (int k = 0; k < j + 1; ++k)
                        z[j * n + k] -= f * e[k] + gj * z[i * n + k];
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (int j = 0; j < i; ++j) {
                double g = 0.0;
                for (int k = 0; k < i; ++k) g += z[i * n + k] * z[k * n + j];
                for (int k = 0; k < i; ++k) z[k * n + j] -= g * z[k * n + i];
            }
        }
        d[i] = z[i * n + i];
        z[i * n + i] = 1.0;
        for (int j = 0; j < i; ++j) z[j * n + i] = z[i * n + j] = 0.0;
    }
}

// QL iteration with implicit shifts on the tridiagonal (d, e); rotations are
// applied to the columns of z.
inline void ql_implicit(int n, double* d, double* e, double* z) {
    constexpr double eps = 2.2204460492503131e-16;
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 50) throw NumericError("symmetric QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z[k * n + i + 1];
                        z[k * n + i + 1] = s * z[k * n + i] + c * f;
                        z[k * n + i] = c * z[k * n + i] - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

inline EigenSystem SymMatrix::eigen_system() const {
    const int n = dim_;
    EigenSystem es;
    es.dim = n;
    std::array<double, 36> z{};
    std::array<double, 6> d{}, e{};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z[static_cast<std::size_t>(i * n + j)] = (*this)(i, j);
    if (n == 1) {
        es.values[0] = z[0];
        es.vectors[0] = 1.0;
        return es;
    }
    detail::tridiagonalize(n, z.data(), d.data(), e.data());
    detail::ql_implicit(n, d.data(), e.data(), z.data());
    // Sort ascending, permuting eigenvector columns along.
    std::array<int, 6> order{};
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.begin() + n,
              [&](int a, int b) { return d[static_cast<std::size_t>(a)] < d[static_cast<std::size_t>(b)]; });
    for (int j = 0; j < n; ++j) {
        int src = order[static_cast<std::size_t>(j)];
        es.values[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(src)];
        for (int i = 0; i < n; ++i)
            es.vectors[static_cast<std::size_t>(i * n + j)] = z[static_cast<std::size_t>(i * n + src)];
    }
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(es.values[static_cast<std::size_t>(i)]))
            throw NumericError("eigenvalue is not finite");
    return es;
}

// (det A)^p for A in the positive semidefinite cone. Eigenvalues in the band
// [-tol, 0] are clamped to zero (cone boundary); anything below the band is
// a hard failure. Exponent is a positive rational such as 1/d or 1/(d-1).
inline double detroot(const SymMatrix& a, double exponent, double tol = -1.0) {
    if (tol < 0.0) tol = a.psd_tolerance();
    EigenSystem es = a.eigen_system();
    double prod = 1.0;
    for (int i = 0; i < a.dim(); ++i) {
        double lam = es.values[static_cast<std::size_t>(i)];
        if (lam < -tol)
            throw NotPsdError("matrix has eigenvalue " + std::to_string(lam) +
                              " below -" + std::to_string(tol));
        if (lam < 0.0) lam = 0.0;
        prod *= lam;
    }
    if (prod <= 0.0) return 0.0;
    return std::pow(prod, exponent);
}

// Elementary symmetric function sigma_k of the eigenvalues; sigma_1 is the
// trace and sigma_d the determinant.
inline double sigma_k(const SymMatrix& a, int k) {
    const int d = a.dim();
    if (k < 1 || k > d) throw DimensionError("sigma_k needs 1 <= k <= dim");
    EigenSystem es = a.eigen_system();
    std::array<double, 7> e{};
    e[0] = 1.0;
    for (int i = 0; i < d; ++i) {
        double lam = es.values[static_cast<std::size_t>(i)];
        for (int j = std::min(i + 1, k); j >= 1; --j)
            e[static_cast<std::size_t>(j)] += lam * e[static_cast<std::size_t>(j - 1)];
    }
    return e[static_cast<std::size_t>(k)];
}

// Cofactor matrix by exact minors (dimensions 1..3). For symmetric input the
// cofactor matrix is symmetric, and A adj(A) = det(A) I with adj = cof here.
inline SymMatrix cofactor_matrix(const SymMatrix& a) {
    const int d = a.dim();
    if (d == 1) return SymMatrix::identity(1);
    if (d == 2) {
        SymMatrix c(2);
        c.at(0, 0) = a(1, 1);
        c.at(0, 1) = -a(0, 1);
        c.at(1, 1) = a(0, 0);
        return c;
    }
    if (d == 3) {
        SymMatrix c(3);
        c.at(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(1, 2);
        c.at(0, 1) = a(1, 2) * a(0, 2) - a(0, 1) * a(2, 2);
        c.at(0, 2) = a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2);
        c.at(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(0, 2);
        c.at(1, 2) = a(0, 1) * a(0, 2) - a(0, 0) * a(1, 2);
        c.at(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
        return c;
    }
    throw DimensionError("cofactor_matrix supports dimensions 1..3");
}

// Random matrices for property tests and identity sweeps.
inline SymMatrix random_symmetric(Rng& rng, int dim, double scale = 1.0) {
    SymMatrix a(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) a.at(i, j) = scale * rng.normal();
    return a;
}

// Haar-ish random orthogonal matrix via Gram-Schmidt on a Gaussian matrix,
// returned row-major.
inline std::vector<double> random_orthogonal(Rng& rng, int dim) {
    const std::size_t n = static_cast<std::size_t>(dim);
    std::vector<double> q(n * n);
    for (int col = 0; col < dim; ++col) {
        std::vector<double> v = rng.normal_vector(dim);
        for (int prev = 0; prev < col; ++prev) {
            double dot = 0.0;
            for (int i = 0; i < dim; ++i) dot += v[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(prev)];
            for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] -= dot * q[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(prev)];
        }
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) return random_orthogonal(rng, dim); // restart on degeneracy
        for (int i = 0; i < dim; ++i) q[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(col)] = v[static_cast<std::size_t>(i)] / nrm;
    }
    return q;
}

// Q^T A Q for row-major orthogonal Q.
inline SymMatrix conjugate(const SymMatrix& a, const std::vector<double>& q) {
    const int d = a.dim();
    const std::size_t n = static_cast<std::size_t>(d);
    SymMatrix b(d);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    s += q[static_cast<std::size_t>(k) * n + static_cast<std::size_t>(i)] * a(k, l) * q[static_cast<std::size_t>(l) * n + static_cast<std::size_t>(j)];
            b.at(i, j) = s;
        }
    }
    return b;
}

// Random PSD matrix with eigenvalues uniform in [lo, hi].
inline SymMatrix random_psd(Rng& rng, int dim, double lo = 0.0, double hi = 1.0) {
    std::vector<double> q = random_orthogonal(rng, dim);
    std::vector<double> lam(static_cast<std::size_t>(dim));
    for (double& x : lam) x = rng.uniform(lo, hi);
    SymMatrix d0 = SymMatrix::diagonal(lam);
    return conjugate(d0, q);
}

} // namespace dpt
