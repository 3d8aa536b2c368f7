#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <functional>

#include "dpt/geometry.hpp"
#include "dpt/rng.hpp"
#include "dpt/tensorfield.hpp"

using namespace dpt;

namespace {

// T_m matrix at x: r^{-m} (m e@e + (d-1-m) I), e = x/|x|.
SymMatrix tm_at(int d, double m, const double* x) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
    double r = std::sqrt(r2);
    SymMatrix t(d);
    for (int i = 0; i < d; ++i) {
        t.at(i, i) = d - 1.0 - m;
        for (int j = i; j < d; ++j) t.at(i, j) += m * x[i] * x[j] / r2;
    }
    t *= std::pow(r, -m);
    return t;
}

double max_node_error(const TensorField& f, const DivergenceReport& rep,
                      const std::function<void(const double*, double*)>& expect) {
    const Geometry& g = f.geom;
    const int d = g.dim();
    double worst = 0.0;
    double x[6], want[6];
    for (int i = 0; i < g.node_count(); ++i) {
        if (g.is_boundary(i)) continue;
        g.node_position(i, x);
        expect(x, want);
        for (int a = 0; a < d; ++a)
            worst = std::max(worst, std::fabs(rep.field[static_cast<std::size_t>(i * d + a)] - want[a]));
    }
    return worst;
}

} // namespace

TEST_CASE("geometry constructors reject bad parameters") {
    CHECK_THROWS_AS(Geometry::torus({1.0}, {4}), ConfigError);
    CHECK_THROWS_AS(Geometry::torus({-1.0}, {16}), ConfigError);
    CHECK_THROWS_AS(Geometry::torus({1.0, 2.0}, {16}), ConfigError);
    CHECK_THROWS_AS(Geometry::ball(2, 1.0, 16, 15), ConfigError);
    CHECK_THROWS_AS(Geometry::ball(2, 0.0, 16, 16), ConfigError);
    CHECK_THROWS_AS(Geometry::slab(1.0, 4, 1.0, 64), ConfigError);
}

TEST_CASE("quadrature weights integrate the unit constant to the volume") {
    CHECK(Geometry::torus({2.0 * pi, 2.0 * pi}, {16, 16}).total_volume() ==
          Catch::Approx(4.0 * pi * pi).epsilon(1e-13));
    CHECK(Geometry::ball(2, 1.0, 24, 16).total_volume() == Catch::Approx(pi).epsilon(1e-13));
    CHECK(Geometry::ball(3, 1.0, 24, 16).total_volume() ==
          Catch::Approx(4.0 * pi / 3.0).epsilon(1e-13));
    CHECK(Geometry::ball(2, 2.0, 24, 16).total_volume() == Catch::Approx(4.0 * pi).epsilon(1e-13));
    CHECK(Geometry::slab(1.0, 16, 2.0, 32).total_volume() == Catch::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("boundary classification") {
    Geometry ball = Geometry::ball(2, 1.0, 12, 16);
    int ring = 0;
    for (int i = 0; i < ball.node_count(); ++i)
        if (ball.is_boundary(i)) {
            ++ring;
            CHECK(ball.node_weight(i) == 0.0);
        }
    CHECK(ring == ball.sphere_count());

    Geometry slab = Geometry::slab(1.0, 10, 2.0, 12);
    int edge = 0;
    for (int i = 0; i < slab.node_count(); ++i) edge += slab.is_boundary(i);
    CHECK(edge == 2 * 12 + 2 * 10 - 4);

    Geometry torus = Geometry::torus({1.0, 1.0}, {8, 8});
    for (int i = 0; i < torus.node_count(); ++i) CHECK_FALSE(torus.is_boundary(i));
}

TEST_CASE("constant fields have machine-zero divergence on every geometry") {
    Rng rng(17);
    for (const Geometry& g : {Geometry::torus({2.0 * pi, 1.0}, {16, 8}),
                              Geometry::torus({1.0, 1.0, 1.0}, {8, 8, 8}),
                              Geometry::ball(2, 1.0, 12, 16),
                              Geometry::ball(3, 1.0, 10, 8),
                              Geometry::slab(1.0, 10, 2.0, 16)}) {
        TensorField f = constant_field(g, random_symmetric(rng, g.dim()), "const");
        DivergenceReport rep = discrete_divergence(f);
        INFO(g.describe());
        CHECK(rep.linf_norm < 1e-10);
        CHECK(rep.l1_norm < 1e-10);
    }
}

TEST_CASE("torus divergence is spectral-exact on band-limited fields") {
    Geometry g = Geometry::torus({2.0 * pi, 2.0 * pi}, {16, 16});
    // diagonal field (sin x0, sin x1)
    TensorField f = sample_field(g, [](const double* x) {
        return SymMatrix::diagonal({std::sin(x[0]), std::sin(x[1])});
    }, "diag");
    DivergenceReport rep = discrete_divergence(f);
    double err = max_node_error(f, rep, [](const double* x, double* want) {
        want[0] = std::cos(x[0]);
        want[1] = std::cos(x[1]);
    });
    CHECK(err < 1e-12);

    // pure off-diagonal field sin x0 sin x1
    TensorField h = sample_field(g, [](const double* x) {
        SymMatrix a(2);
        a.at(0, 1) = std::sin(x[0]) * std::sin(x[1]);
        return a;
    }, "offdiag");
    rep = discrete_divergence(h);
    err = max_node_error(h, rep, [](const double* x, double* want) {
        want[0] = std::sin(x[0]) * std::cos(x[1]);
        want[1] = std::cos(x[0]) * std::sin(x[1]);
    });
    CHECK(err < 1e-12);
}

TEST_CASE("ball divergence of x@x is (d+1)x") {
    auto xx = [](const double* x) { return SymMatrix::rank_one({x[0], x[1]}); };
    auto xx3 = [](const double* x) { return SymMatrix::rank_one({x[0], x[1], x[2]}); };
    auto want_d = [](int d) {
        return [d](const double* x, double* want) {
            for (int a = 0; a < d; ++a) want[a] = (d + 1) * x[a];
        };
    };

    // d = 2: every stencil direction sees a polynomial it differentiates exactly
    Geometry g2 = Geometry::ball(2, 1.0, 16, 16);
    TensorField f2 = sample_field(g2, xx, "xx");
    CHECK(max_node_error(f2, discrete_divergence(f2), want_d(2)) < 1e-11);

    // d = 3: the mixed radial-polar components are not polynomial in cos(theta),
    // so the error is second order in the polar spacing
    double err_coarse = 0.0, err_fine = 0.0;
    {
        Geometry g = Geometry::ball(3, 1.0, 16, 16);
        TensorField f = sample_field(g, xx3, "xx");
        err_coarse = max_node_error(f, discrete_divergence(f), want_d(3));
    }
    {
        Geometry g = Geometry::ball(3, 1.0, 16, 32);
        TensorField f = sample_field(g, xx3, "xx");
        err_fine = max_node_error(f, discrete_divergence(f), want_d(3));
    }
    CHECK(err_coarse < 0.2);
    CHECK(err_coarse / err_fine > 2.5); // second order: ratio about 4
}

TEST_CASE("ball divergence is exact for radial quadratic fields") {
    Geometry g = Geometry::ball(3, 1.0, 12, 10);
    TensorField f = sample_field(g, [](const double* x) {
        double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        SymMatrix a = SymMatrix::identity(3);
        a *= r2;
        return a;
    }, "r2 I");
    double err = max_node_error(f, discrete_divergence(f), [](const double* x, double* want) {
        for (int a = 0; a < 3; ++a) want[a] = 2.0 * x[a];
    });
    CHECK(err < 1e-11);
}

TEST_CASE("slab divergence is exact for quadratic components") {
    Geometry g = Geometry::slab(1.0, 12, 2.0, 16);
    TensorField f = sample_field(g, [](const double* x) {
        SymMatrix a(2);
        a.at(0, 0) = x[0] * x[0];
        a.at(0, 1) = x[0] * x[1];
        a.at(1, 1) = x[1] * x[1];
        return a;
    }, "quadratic");
    double err = max_node_error(f, discrete_divergence(f), [](const double* x, double* want) {
        want[0] = 3.0 * x[0];
        want[1] = 3.0 * x[1];
    });
    CHECK(err < 1e-11);
}

TEST_CASE("normal trace masses") {
    SECTION("identity on balls: r^{d-1} |S^{d-1}|") {
        for (int d : {2, 3}) {
            for (double radius : {1.0, 2.0}) {
                Geometry g = Geometry::ball(d, radius, 12, 16);
                TensorField f = constant_field(g, SymMatrix::identity(d), "I");
                double want = std::pow(radius, d - 1) * sphere_area(d);
                CHECK(normal_trace_mass(f, BoundaryFace::sphere) ==
                      Catch::Approx(want).epsilon(1e-12));
            }
        }
    }
    SECTION("identity on slab faces: the y-box length per face") {
        Geometry g = Geometry::slab(1.0, 10, 3.0, 64);
        TensorField f = constant_field(g, SymMatrix::identity(2), "I");
        CHECK(normal_trace_mass(f, BoundaryFace::slab_bottom) == Catch::Approx(6.0).epsilon(1e-12));
        CHECK(normal_trace_mass(f, BoundaryFace::slab_top) == Catch::Approx(6.0).epsilon(1e-12));
    }
    SECTION("radial power fields: (d-1) |S^{d-1}| independent of the exponent") {
        for (int d : {2, 3}) {
            for (double m : {0.3, 0.7, 1.5}) {
                Geometry g = Geometry::ball(d, 1.0, 12, 16);
                TensorField f = sample_field(g, [d, m](const double* x) { return tm_at(d, m, x); },
                                             "tm");
                CHECK(normal_trace_mass(f, BoundaryFace::sphere) ==
                      Catch::Approx((d - 1.0) * sphere_area(d)).epsilon(1e-12));
            }
        }
    }
    SECTION("torus has no boundary") {
        Geometry g = Geometry::torus({1.0, 1.0}, {8, 8});
        TensorField f = constant_field(g, SymMatrix::identity(2), "I");
        CHECK_THROWS_AS(normal_trace_mass(f, BoundaryFace::sphere), DimensionError);
    }
}

TEST_CASE("mass norms") {
    Geometry g = Geometry::ball(2, 1.0, 64, 16);
    TensorField zero = constant_field(g, SymMatrix(2), "0");
    CHECK(mass_norm(zero) == 0.0);

    TensorField eye = constant_field(g, SymMatrix::identity(2), "I");
    CHECK(mass_norm(eye) == Catch::Approx(pi * std::sqrt(2.0)).epsilon(1e-12));

    // |T_m|_F = r^{-m} sqrt(1 + (1-m)^2) in d = 2; radial integral in closed form
    TensorField tm = sample_field(g, [](const double* x) { return tm_at(2, 0.5, x); }, "tm");
    CHECK(mass_norm(tm) == Catch::Approx(2.0 * pi * std::sqrt(5.0) / 3.0).epsilon(1e-4));
}

TEST_CASE("mean tensor of a trigonometric perturbation is the constant part") {
    Geometry g = Geometry::torus({2.0 * pi, 2.0 * pi}, {16, 16});
    SymMatrix s0 = SymMatrix::diagonal({2.0, 3.0});
    s0.at(0, 1) = 0.5;
    TensorField f = sample_field(g, [&](const double* x) {
        SymMatrix a = s0;
        a.at(0, 0) += 0.3 * std::sin(x[0] + 2.0 * x[1]);
        a.at(0, 1) += 0.2 * std::cos(x[1]);
        return a;
    }, "perturbed");
    SymMatrix mean = mean_tensor(f);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(mean(i, j) == Catch::Approx(s0(i, j)).margin(1e-13));
}

TEST_CASE("determinant power integrals") {
    Geometry torus = Geometry::torus({2.0 * pi, 2.0 * pi}, {16, 16});
    TensorField eye = constant_field(torus, SymMatrix::identity(2), "I");
    CHECK(det_power_integral(eye, 1.0) == Catch::Approx(4.0 * pi * pi).epsilon(1e-13));

    // det T_m = (1-m) r^{-2m} in d = 2; for m = 1/2 the integrand is constant
    Geometry ball = Geometry::ball(2, 1.0, 24, 16);
    TensorField tm = sample_field(ball, [](const double* x) { return tm_at(2, 0.5, x); }, "tm");
    CHECK(det_power_integral(tm, 1.0) == Catch::Approx(pi).epsilon(1e-12));
}

TEST_CASE("psd scan over nodes") {
    Geometry g = Geometry::ball(2, 1.0, 10, 16);
    TensorField f = constant_field(g, SymMatrix::diagonal({1.0, 2.0}), "I");
    CHECK(min_eigenvalue(f) == Catch::Approx(1.0).epsilon(1e-12));
    f.values[3].at(0, 0) = -5.0;
    CHECK(min_eigenvalue(f) < -1.0);
}

TEST_CASE("slab decay guard") {
    Geometry g = Geometry::slab(1.0, 10, 8.0, 64);
    TensorField gauss = sample_field(g, [](const double* x) {
        SymMatrix a = SymMatrix::identity(2);
        a *= std::exp(-x[1] * x[1]);
        return a;
    }, "gauss");
    CHECK_NOTHROW(require_slab_decay(gauss));

    TensorField eye = constant_field(g, SymMatrix::identity(2), "I");
    CHECK_THROWS_AS(require_slab_decay(eye), DecayError);
}

TEST_CASE("serialization round trip preserves geometry, flags, and values") {
    Rng rng(99);
    auto tmp = std::filesystem::temp_directory_path() / "dpt_field_roundtrip.bin";
    for (const Geometry& g : {Geometry::torus({2.0 * pi, 1.5}, {16, 8}),
                              Geometry::ball(3, 2.0, 10, 8),
                              Geometry::slab(0.5, 10, 2.0, 12)}) {
        TensorField f = sample_field(g, [&](const double*) {
            return random_symmetric(rng, g.dim());
        }, "random field");
        f.flagged_dpt = true;
        save_field(f, tmp.string());
        TensorField back = load_field(tmp.string());
        CHECK(back.geom.describe() == g.describe());
        CHECK(back.geom.node_count() == g.node_count());
        CHECK(back.provenance == f.provenance);
        CHECK(back.flagged_dpt == f.flagged_dpt);
        CHECK(back.flagged_divfree == f.flagged_divfree);
        bool same = true;
        for (int i = 0; i < g.node_count(); ++i)
            for (int a = 0; a < g.dim(); ++a)
                for (int b = a; b < g.dim(); ++b)
                    same = same && back.at(i)(a, b) == f.at(i)(a, b);
        CHECK(same);
    }
    std::filesystem::remove(tmp);
    CHECK_THROWS_AS(load_field(tmp.string()), ConfigError);
}
