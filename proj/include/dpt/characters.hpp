#pragma once

// Irreducible characters of a small permutation group, computed numerically
// from the class algebra: the vectors of central character values are the
// common eigenvectors of the class-sum structure matrices. A random real
// combination of those commuting matrices separates the eigenspaces; the
// recovered rows are validated against the orthogonality relations before
// being returned, and the computation retries with a fresh combination when
// validation fails.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dpt/errors.hpp"
#include "dpt/permgroup.hpp"
#include "dpt/rng.hpp"

namespace dpt {

using cdouble = std::complex<double>;

struct CharacterTable {
    PermGroup group;
    std::vector<std::vector<int>> classes; // element indices per conjugacy class
    std::vector<int> class_of;             // element index -> class index
    // chi[t][c]: character t evaluated on class c; degrees are exact integers.
    std::vector<std::vector<cdouble>> chi;
    std::vector<int> degrees;

    int num_classes() const { return static_cast<int>(classes.size()); }
    int num_characters() const { return static_cast<int>(chi.size()); }

    cdouble value(int t, int element_index) const {
        return chi[static_cast<std::size_t>(t)][static_cast<std::size_t>(class_of[static_cast<std::size_t>(element_index)])];
    }
};

namespace detail {

// Monic characteristic polynomial coefficients c[0..k] (c[k] = 1) of a real
// k x k matrix, via the trace recursion.
inline std::vector<double> char_poly(const std::vector<double>& m, int k) {
    std::vector<double> c(static_cast<std::size_t>(k + 1), 0.0);
    c[static_cast<std::size_t>(k)] = 1.0;
    std::vector<double> am(m); // A_1 = M
    for (int step = 1; step <= k; ++step) {
        if (step > 1) {
            // A_step = M (A_{step-1} + c_{k-step+1} I)
            std::vector<double> tmp(am);
            double shift = c[static_cast<std::size_t>(k - step + 1)];
            for (int i = 0; i < k; ++i) tmp[static_cast<std::size_t>(i * k + i)] += shift;
            std::vector<double> prod(static_cast<std::size_t>(k * k), 0.0);
            for (int i = 0; i < k; ++i)
                for (int l = 0; l < k; ++l) {
                    double s = 0.0;
                    for (int j = 0; j < k; ++j) s += m[static_cast<std::size_t>(i * k + j)] * tmp[static_cast<std::size_t>(j * k + l)];
                    prod[static_cast<std::size_t>(i * k + l)] = s;
                }
            am = std::move(prod);
        }
        double tr = 0.0;
        for (int i = 0; i < k; ++i) tr += am[static_cast<std::size_t>(i * k + i)];
        c[static_cast<std::size_t>(k - step)] = -tr / step;
    }
    return c;
}

inline cdouble poly_eval(const std::vector<double>& c, cdouble z) {
    cdouble v(0.0, 0.0);
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) v = v * z + c[static_cast<std::size_t>(i)];
    return v;
}

inline cdouble poly_eval_deriv(const std::vector<double>& c, cdouble z) {
    cdouble v(0.0, 0.0);
    for (int i = static_cast<int>(c.size()) - 1; i >= 1; --i) v = v * z + static_cast<double>(i) * c[static_cast<std::size_t>(i)];
    return v;
}

// All complex roots of a low-degree monic real polynomial: simultaneous
// (Durand-Kerner) iteration plus a few Newton polish steps per root.
inline std::vector<cdouble> poly_roots(const std::vector<double>& c) {
    const int k = static_cast<int>(c.size()) - 1;
    double bound = 0.0;
    for (int i = 0; i < k; ++i) bound = std::max(bound, std::fabs(c[static_cast<std::size_t>(i)]));
    bound += 1.0;
    std::vector<cdouble> z(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        double ang = 6.283185307179586 * (i + 0.25) / k;
        z[static_cast<std::size_t>(i)] = bound * cdouble(std::cos(ang), std::sin(ang));
    }
    for (int it = 0; it < 500; ++it) {
        double worst = 0.0;
        for (int i = 0; i < k; ++i) {
            cdouble denom(1.0, 0.0);
            for (int j = 0; j < k; ++j)
                if (j != i) denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
            if (std::abs(denom) < 1e-300) continue;
            cdouble delta = poly_eval(c, z[static_cast<std::size_t>(i)]) / denom;
            z[static_cast<std::size_t>(i)] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-14 * bound) break;
    }
    for (int i = 0; i < k; ++i) {
        for (int it = 0; it < 4; ++it) {
            cdouble dp = poly_eval_deriv(c, z[static_cast<std::size_t>(i)]);
            if (std::abs(dp) < 1e-300) break;
            z[static_cast<std::size_t>(i)] -= poly_eval(c, z[static_cast<std::size_t>(i)]) / dp;
        }
    }
    return z;
}

// One vector spanning the null space of a (numerically) rank k-1 complex
// matrix; empty when the rank deficiency is not exactly one.
inline std::vector<cdouble> null_vector(std::vector<cdouble> a, int k) {
    double scale = 0.0;
    for (const cdouble& v : a) scale = std::max(scale, std::abs(v));
    const double tol = 1e-8 * (scale + 1.0);
    std::vector<int> piv_col_of_row(static_cast<std::size_t>(k), -1);
    std::vector<bool> col_used(static_cast<std::size_t>(k), false);
    int rank = 0;
    for (int col = 0; col < k && rank < k; ++col) {
        int best = -1;
        double mag = tol;
        for (int row = rank; row < k; ++row) {
            double m = std::abs(a[static_cast<std::size_t>(row * k + col)]);
            if (m > mag) {
                mag = m;
                best = row;
            }
        }
        if (best < 0) continue;
        for (int j = 0; j < k; ++j)
            std::swap(a[static_cast<std::size_t>(rank * k + j)], a[static_cast<std::size_t>(best * k + j)]);
        cdouble p = a[static_cast<std::size_t>(rank * k + col)];
        for (int row = 0; row < k; ++row) {
            if (row == rank) continue;
            cdouble f = a[static_cast<std::size_t>(row * k + col)] / p;
            for (int j = 0; j < k; ++j)
                a[static_cast<std::size_t>(row * k + j)] -= f * a[static_cast<std::size_t>(rank * k + j)];
        }
        piv_col_of_row[static_cast<std::size_t>(rank)] = col;
        col_used[static_cast<std::size_t>(col)] = true;
        ++rank;
    }
    if (rank != k - 1) return {};
    int free_col = -1;
    for (int col = 0; col < k; ++col)
        if (!col_used[static_cast<std::size_t>(col)]) free_col = col;
    std::vector<cdouble> x(static_cast<std::size_t>(k), cdouble(0.0, 0.0));
    x[static_cast<std::size_t>(free_col)] = cdouble(1.0, 0.0);
    for (int row = rank - 1; row >= 0; --row) {
        int pc = piv_col_of_row[static_cast<std::size_t>(row)];
        cdouble s = a[static_cast<std::size_t>(row * k + free_col)];
        x[static_cast<std::size_t>(pc)] = -s / a[static_cast<std::size_t>(row * k + pc)];
    }
    return x;
}

// Rayleigh quotient iteration on a real matrix with a complex simple
// eigenpair: a step or two takes the elimination-accuracy estimate down to
// machine precision. Tiny pivots are floored, which is the standard inverse
// iteration trick, not an error.
inline void refine_eigenpair(const std::vector<double>& m, int k, cdouble& lambda,
                             std::vector<cdouble>& v) {
    double scale = 1.0;
    for (double x : m) scale = std::max(scale, std::fabs(x));
    auto norm = [&](const std::vector<cdouble>& x) {
        double s = 0.0;
        for (const cdouble& c : x) s += std::norm(c);
        return std::sqrt(s);
    };
    double vn = norm(v);
    if (vn == 0.0) return;
    for (cdouble& c : v) c /= vn;
    for (int it = 0; it < 3; ++it) {
        std::vector<cdouble> a(static_cast<std::size_t>(k * k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                a[static_cast<std::size_t>(i * k + j)] =
                    cdouble(m[static_cast<std::size_t>(i * k + j)], 0.0) - (i == j ? lambda : cdouble(0.0, 0.0));
        std::vector<cdouble> x = v;
        for (int col = 0; col < k; ++col) {
            int piv = col;
            for (int row = col + 1; row < k; ++row)
                if (std::abs(a[static_cast<std::size_t>(row * k + col)]) >
                    std::abs(a[static_cast<std::size_t>(piv * k + col)]))
                    piv = row;
            if (piv != col) {
                for (int j = 0; j < k; ++j)
                    std::swap(a[static_cast<std::size_t>(col * k + j)], a[static_cast<std::size_t>(piv * k + j)]);
                std::swap(x[static_cast<std::size_t>(col)], x[static_cast<std::size_t>(piv)]);
            }
            cdouble& p = a[static_cast<std::size_t>(col * k + col)];
            if (std::abs(p) < 1e-300) p = cdouble(1e-300 * scale, 0.0);
            for (int row = col + 1; row < k; ++row) {
                cdouble f = a[static_cast<std::size_t>(row * k + col)] / p;
                for (int j = col; j < k; ++j)
                    a[static_cast<std::size_t>(row * k + j)] -= f * a[static_cast<std::size_t>(col * k + j)];
                x[static_cast<std::size_t>(row)] -= f * x[static_cast<std::size_t>(col)];
            }
        }
        for (int row = k - 1; row >= 0; --row) {
            cdouble s = x[static_cast<std::size_t>(row)];
            for (int j = row + 1; j < k; ++j)
                s -= a[static_cast<std::size_t>(row * k + j)] * x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(row)] = s / a[static_cast<std::size_t>(row * k + row)];
        }
        double xn = norm(x);
        if (!(xn > 0.0) || !std::isfinite(xn)) return;
        for (cdouble& c : x) c /= xn;
        v = x;
        std::vector<cdouble> mv(static_cast<std::size_t>(k), cdouble(0.0, 0.0));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                mv[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(i * k + j)] * v[static_cast<std::size_t>(j)];
        cdouble rq(0.0, 0.0);
        for (int i = 0; i < k; ++i) rq += std::conj(v[static_cast<std::size_t>(i)]) * mv[static_cast<std::size_t>(i)];
        lambda = rq;
        double resid = 0.0;
        for (int i = 0; i < k; ++i)
            resid += std::norm(mv[static_cast<std::size_t>(i)] - lambda * v[static_cast<std::size_t>(i)]);
        if (std::sqrt(resid) < 1e-13 * scale) break;
    }
}

} // namespace detail

inline CharacterTable character_table(const PermGroup& g) {
    CharacterTable t;
    t.group = g;
    t.classes = g.conjugacy_classes();
    t.class_of = g.class_index_of_elements();
    const int k = static_cast<int>(t.classes.size());
    const int n = g.order();

    // Structure matrices: B_i[j][l] = #{x in K_i : x^{-1} rep_l in K_j}.
    std::vector<std::vector<double>> b(static_cast<std::size_t>(k),
                                       std::vector<double>(static_cast<std::size_t>(k * k), 0.0));
    for (int i = 0; i < k; ++i) {
        for (int l = 0; l < k; ++l) {
            const Perm& rep = g.element(t.classes[static_cast<std::size_t>(l)][0]);
            std::vector<int> count(static_cast<std::size_t>(k), 0);
            for (int xi : t.classes[static_cast<std::size_t>(i)]) {
                Perm y = perm_compose(perm_inverse(g.element(xi)), rep);
                ++count[static_cast<std::size_t>(t.class_of[static_cast<std::size_t>(g.index_of(y))])];
            }
            for (int j = 0; j < k; ++j)
                b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j * k + l)] = count[static_cast<std::size_t>(j)];
        }
    }

    for (int attempt = 0; attempt < 40; ++attempt) {
        Rng rng(0xD1C50ull + 7919ull * static_cast<std::uint64_t>(attempt));
        std::vector<double> m(static_cast<std::size_t>(k * k), 0.0);
        for (int i = 0; i < k; ++i) {
            double r = rng.uniform(0.5, 2.0);
            for (int jl = 0; jl < k * k; ++jl) m[static_cast<std::size_t>(jl)] += r * b[static_cast<std::size_t>(i)][static_cast<std::size_t>(jl)];
        }
        std::vector<cdouble> roots = detail::poly_roots(detail::char_poly(m, k));
        double sep = 1e300, magmax = 1.0;
        for (int i = 0; i < k; ++i) {
            magmax = std::max(magmax, std::abs(roots[static_cast<std::size_t>(i)]));
            for (int j = i + 1; j < k; ++j)
                sep = std::min(sep, std::abs(roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)]));
        }
        if (sep < 1e-6 * magmax) continue; // coincident eigenvalues: try another combination

        std::vector<std::vector<cdouble>> rows;
        bool ok = true;
        for (int r = 0; r < k && ok; ++r) {
            std::vector<cdouble> a(static_cast<std::size_t>(k * k));
            for (int jl = 0; jl < k * k; ++jl)
                a[static_cast<std::size_t>(jl)] = cdouble(m[static_cast<std::size_t>(jl)], 0.0);
            for (int i = 0; i < k; ++i) a[static_cast<std::size_t>(i * k + i)] -= roots[static_cast<std::size_t>(r)];
            std::vector<cdouble> v = detail::null_vector(std::move(a), k);
            if (v.empty() || std::abs(v[0]) < 1e-10) {
                ok = false;
                break;
            }
            cdouble lambda = roots[static_cast<std::size_t>(r)];
            detail::refine_eigenpair(m, k, lambda, v);
            if (std::abs(v[0]) < 1e-10) {
                ok = false;
                break;
            }
            // omega(identity class) = 1
            cdouble v0 = v[0];
            for (cdouble& x : v) x /= v0;
            rows.push_back(std::move(v));
        }
        if (!ok) continue;

        // omega -> chi
        std::vector<std::vector<cdouble>> chi;
        std::vector<int> degrees;
        for (int r = 0; r < k && ok; ++r) {
            double s = 0.0;
            for (int c = 0; c < k; ++c)
                s += std::norm(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) /
                     static_cast<double>(t.classes[static_cast<std::size_t>(c)].size());
            double deg = std::sqrt(static_cast<double>(n) / s);
            int deg_int = static_cast<int>(std::lround(deg));
            if (std::fabs(deg - deg_int) > 1e-6 || deg_int < 1) {
                ok = false;
                break;
            }
            std::vector<cdouble> row(static_cast<std::size_t>(k));
            for (int c = 0; c < k; ++c)
                row[static_cast<std::size_t>(c)] = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] *
                                                   (static_cast<double>(deg_int) / static_cast<double>(t.classes[static_cast<std::size_t>(c)].size()));
            chi.push_back(std::move(row));
            degrees.push_back(deg_int);
        }
        if (!ok) continue;

        // Validate first orthogonality: sum_c |K_c| chi_t(c) conj(chi_s(c)) = |G| delta_ts.
        for (int a = 0; a < k && ok; ++a) {
            for (int bb = 0; bb < k && ok; ++bb) {
                cdouble s(0.0, 0.0);
                for (int c = 0; c < k; ++c)
                    s += static_cast<double>(t.classes[static_cast<std::size_t>(c)].size()) *
                         chi[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] *
                         std::conj(chi[static_cast<std::size_t>(bb)][static_cast<std::size_t>(c)]);
                double want = (a == bb) ? static_cast<double>(n) : 0.0;
                if (std::abs(s - want) > 1e-8 * n) ok = false;
            }
        }
        if (!ok) continue;

        std::vector<int> order(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
        auto key = [&](int r, int c) {
            const cdouble& v = chi[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            return std::make_pair(std::lround(v.real() * 1e8), std::lround(v.imag() * 1e8));
        };
        std::sort(order.begin(), order.end(), [&](int a, int bb) {
            if (degrees[static_cast<std::size_t>(a)] != degrees[static_cast<std::size_t>(bb)])
                return degrees[static_cast<std::size_t>(a)] < degrees[static_cast<std::size_t>(bb)];
            for (int c = 0; c < k; ++c) {
                auto ka = key(a, c), kb = key(bb, c);
                if (ka != kb) return ka > kb; // trivial character (all +1) sorts first
            }
            return false;
        });
        for (int i : order) {
            t.chi.push_back(chi[static_cast<std::size_t>(i)]);
            t.degrees.push_back(degrees[static_cast<std::size_t>(i)]);
        }
        return t;
    }
    throw NumericError("character table computation failed to converge for group " + g.structure_name());
}

} // namespace dpt
