#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "c0mass/charts.hpp"
#include "c0mass/geometry.hpp"

using namespace c0m;

namespace {

Vec pt(double a, double b, double c) {
    Vec x(3);
    x << a, b, c;
    return x;
}

}  // namespace

TEST_CASE("fd weights reproduce the classical stencils") {
    auto w = fd_weights(2, {-1, 0, 1});
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(w[1] == doctest::Approx(-2.0));
    CHECK(w[2] == doctest::Approx(1.0));
    auto v = fd_weights(1, {-2, -1, 0, 1, 2});
    CHECK(v[0] == doctest::Approx(1.0 / 12));
    CHECK(v[3] == doctest::Approx(2.0 / 3));
}

TEST_CASE("conformal scalar curvature matches the closed form") {
    // g = e^{2f} delta, R = -e^{-2f} (2(n-1) Lap f + (n-2)(n-1) |grad f|^2)
    for (int n : {3, 4, 5}) {
        const double a = 0.2;
        auto f = [a](const Vec& x) { return a * std::exp(-x.squaredNorm() / 2); };
        auto g = make_conformal(n, f, "gauss");
        Vec x = Vec::Zero(n);
        x(0) = 0.7;
        x(1) = -0.3;
        if (n > 2) x(2) = 0.4;
        double e = std::exp(-x.squaredNorm() / 2);
        double lap = a * e * (x.squaredNorm() - n);
        double grad2 = a * a * e * e * x.squaredNorm();
        double want = -std::exp(-2 * f(x)) * (2.0 * (n - 1) * lap + (n - 2.0) * (n - 1) * grad2);
        DerivativeStencil st;
        st.spacing = 1e-2;
        CHECK(scalar_curvature(*g, x, st) == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("isotropic Schwarzschild is scalar flat") {
    auto g = make_schwarzschild_isotropic(3, 1.0);
    for (double l : {2.0, 5.0, 20.0}) {
        Vec x = pt(l * 0.6, l * 0.8, 0.0);
        CHECK(std::abs(scalar_curvature(*g, x)) < 1e-7);
    }
}

TEST_CASE("curvature split adds up and the quadratic part is second order") {
    auto g = make_power_decay(3, 0.3, 1.0);
    Vec x = pt(2.0, 1.0, -1.0);
    ScalarSplit s = scalar_curvature_split(*g, x);
    CHECK(s.linear + s.quadratic == doctest::Approx(scalar_curvature(*g, x)).epsilon(1e-12));
    auto g2 = make_amplified(g, 0.5);
    ScalarSplit s2 = scalar_curvature_split(*g2, x);
    CHECK(s2.linear == doctest::Approx(0.5 * s.linear).epsilon(1e-9));
    CHECK(s2.quadratic / s.quadratic == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("rotated and translated pullbacks") {
    auto g = make_power_decay(3, 0.4, 1.0);
    Mat A(3, 3);
    A << 1, 2, 0, 2, -1, 1, 0, 1, 3;
    auto aniso = make_sum(g, std::make_shared<ClosedFormField>(3, Domain::full(), "aniso",
                                                               [A](const Vec& x) { return (A * std::exp(-x.norm())).eval(); }));
    Mat O = random_rotation(3, 4);
    auto r = make_rotated(aniso, O);
    Vec x = pt(0.3, 1.2, -0.8);
    Mat want = O.transpose() * (Mat::Identity(3, 3) + aniso->h(O * x)) * O - Mat::Identity(3, 3);
    CHECK((r->h(x) - want).norm() < 1e-14);
    Vec v = pt(1, 0, 0);
    CHECK((make_translated(aniso, v)->h(x) - aniso->h(x + v)).norm() == 0.0);
    CHECK((make_scaled_pullback(aniso, 2.0)->h(x) - aniso->h(2.0 * x)).norm() == 0.0);
}

TEST_CASE("radial profile fields agree with their Cartesian form") {
    ScalarFn A = [](double l) { return 0.2 / (1 + l * l); };
    ScalarFn B = [](double l) { return 0.1 / (1 + l); };
    auto g = make_radial(3, A, B, "p");
    Vec x = pt(1.0, -2.0, 0.5);
    double l = x.norm();
    Vec u = x / l;
    Mat want = B(l) * Mat::Identity(3, 3) + (A(l) - B(l)) * u * u.transpose();
    CHECK((g->h(x) - want).norm() < 1e-15);
    // the exact jet against plain differences of the closed form
    auto cf = std::make_shared<ClosedFormField>(3, Domain::full(), "cf", [&](const Vec& y) {
        double m = y.norm();
        Vec w = y / m;
        return (B(m) * Mat::Identity(3, 3) + (A(m) - B(m)) * w * w.transpose()).eval();
    });
    DerivativeStencil st;
    st.spacing = 1e-3;
    Jet a = g->jet(x, st), b = cf->jet(x, st);
    for (int k = 0; k < 3; ++k) {
        CHECK((a.d[k] - b.d[k]).norm() < 1e-9);
        for (int m = 0; m < 3; ++m) CHECK((a.dd[k][m] - b.dd[k][m]).norm() < 1e-6);
    }
}

TEST_CASE("positive definiteness audit rejects degenerate metrics") {
    Mat h = -1.5 * Mat::Identity(3, 3);
    auto g = make_constant(3, h);
    CHECK_THROWS_AS(check_positive_definite(*g, {Vec::Zero(3)}), Error);
    CHECK_NOTHROW(check_positive_definite(*make_flat(3), {Vec::Zero(3)}));
}

TEST_CASE("grid fields round trip through disk") {
    std::vector<std::vector<double>> comps(6, std::vector<double>(8 * 8 * 8));
    for (size_t c = 0; c < comps.size(); ++c)
        for (size_t p = 0; p < comps[c].size(); ++p) comps[c][p] = 1e-3 * static_cast<double>(c + 1) * std::sin(0.1 * p);
    GridField g(3, 8, -1.0, 2.0 / 7, comps);
    const std::string path = "geometry_roundtrip.grid";
    g.save(path);
    auto back = GridField::load(path);
    CHECK(back->components() == g.components());
    CHECK(back->spacing() == g.spacing());
    std::remove(path.c_str());
}
