#include <doctest.h>

#include <cmath>

#include "c0mass/charts.hpp"

using namespace c0m;

namespace {

Vec pt(double a, double b, double c) {
    Vec x(3);
    x << a, b, c;
    return x;
}

}  // namespace

TEST_CASE("random rotations are proper and orthogonal") {
    for (unsigned s = 1; s < 6; ++s)
        for (int n : {3, 4, 5}) {
            Mat O = random_rotation(n, s);
            CHECK((O.transpose() * O - Mat::Identity(n, n)).norm() < 1e-13);
            CHECK(O.determinant() == doctest::Approx(1.0));
        }
}

TEST_CASE("isometry algebra") {
    EuclideanIsometry a{random_rotation(3, 1), pt(1, 2, 3)}, b{random_rotation(3, 2), pt(-1, 0, 4)};
    Vec x = pt(0.5, -0.2, 0.9);
    CHECK((a.compose(b)(x) - a(b(x))).norm() < 1e-14);
    CHECK((a.inverse()(a(x)) - x).norm() < 1e-14);
}

TEST_CASE("mollifier integrates to one and fixes affine maps") {
    MollifierProfile p = constant_scale(3, 0.3);
    CHECK(mollifier_mass(p) == doctest::Approx(1.0).epsilon(1e-13));
    EuclideanIsometry L{random_rotation(3, 9), pt(0.1, 0.2, 0.3)};
    Vec x = pt(2, -1, 0.5);
    CHECK((mollify_map(L.as_map(), p, x) - L(x)).norm() < 1e-13);
    CHECK((mollify_differential(L.as_map(), p, x) - L.O).norm() < 1e-12);
    // F_rho of a quadratic picks up the second moment of the kernel
    SmoothMap Q;
    Q.f = [](const Vec& y) { return Vec::Constant(3, y.squaredNorm()); };
    double shift = mollify_map(Q, p, Vec::Zero(3))(0);
    CHECK(shift > 0.0);
    CHECK(shift < 0.09);
}

TEST_CASE("variable scale differential matches differences of the mollified map") {
    auto prof = make_mollifier(
        3, [](double l) { return 0.05 + 0.02 * l; }, [](double) { return 0.02; });
    SmoothMap F;
    F.f = [](const Vec& y) { return pt(y(0) + 0.1 * std::sin(y(1)), y(1) + 0.05 * y(2) * y(2), y(2)); };
    Vec x = pt(0.7, 1.3, -0.4);
    Mat D = mollify_differential(F, prof, x);
    Mat num(3, 3);
    const double h = 1e-5;
    for (int k = 0; k < 3; ++k) {
        Vec e = Vec::Zero(3);
        e(k) = h;
        num.col(k) = (mollify_map(F, prof, x + e) - mollify_map(F, prof, x - e)) / (2 * h);
    }
    CHECK((D - num).norm() < 1e-7);
}

TEST_CASE("anchored Procrustes recovers an isometry") {
    EuclideanIsometry L{random_rotation(3, 5), pt(3, -1, 2)};
    Vec x0 = pt(5, 0, 0);
    EuclideanIsometry fit = fit_isometry(L.as_map(), x0, 1.0);
    CHECK((fit.O - L.O).norm() < 1e-12);
    CHECK((fit.v - L.v).norm() < 1e-11);
    SmoothMap F = L.as_map();
    F.f = [L](const Vec& y) { return (L(y) + 1e-3 * Vec::Constant(3, std::sin(y(0)))).eval(); };
    EuclideanIsometry g = fit_isometry(F, x0, 1.0);
    // exact up to the rounding of O x0 + (F(x0) - O x0)
    CHECK((g(x0) - F(x0)).norm() <= 4e-16 * (1.0 + F(x0).norm()));
    // reflections only when the map reverses orientation
    SmoothMap R;
    R.f = [](const Vec& y) { return pt(-y(0), y(1), y(2)); };
    CHECK(fit_isometry(R, x0, 1.0).O.determinant() == doctest::Approx(-1.0));
}

TEST_CASE("gluing ramp and cutoff") {
    const double r = 2.0;
    CHECK(gluing_rho(0.5 * r, r) == 0.0);
    CHECK(gluing_rho(r, r) == 0.0);
    CHECK(gluing_rho(6 * r, r) == doctest::Approx(r / 16));
    CHECK(gluing_rho(8 * r, r) == doctest::Approx(r / 16));
    CHECK(gluing_rho(3.5 * r, r) == doctest::Approx(r / 16 * std::exp(1.0 - 1.0 / 0.5)));
    CHECK(gluing_chi(9 * r, r) == 1.0);
    CHECK(gluing_chi(10 * r, r) == 0.0);
    double mx = 0.0;
    for (double u = 9.0; u <= 10.0; u += 1e-3) mx = std::max(mx, std::abs(gluing_chi_d1(u * r, r)));
    CHECK(mx <= 10.0 / r);
    double h = 1e-6;
    CHECK(gluing_rho_d1(4 * r, r) == doctest::Approx((gluing_rho(4 * r + h, r) - gluing_rho(4 * r - h, r)) / (2 * h)));
}

TEST_CASE("glued isometry is the isometry") {
    EuclideanIsometry L{random_rotation(3, 2), pt(0, 1, 0)};
    GluedMap G = glue_to_isometry(L.as_map(), 1.0, 50);
    for (const Vec& x : halton_annulus(3, 0.0, 12.0, 100)) CHECK((G.map(x) - L(x)).norm() < 1e-9);
    CHECK(G.sup_pullback_deviation < 1e-8);
}

TEST_CASE("bilipschitz profile and injectivity") {
    SmoothMap S;
    S.f = [](const Vec& y) { return (1.01 * y).eval(); };
    BilipschitzProfile b = bilipschitz_profile(S, 0.0, 5.0, 200);
    CHECK(b.delta == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(injectivity_probe(S, 0.0, 5.0, 2000).pass);
    SmoothMap fold;
    fold.f = [](const Vec& y) { return pt(std::abs(y(0)), y(1), y(2)); };
    CHECK_FALSE(injectivity_probe(fold, 0.0, 5.0, 2000).pass);
}

TEST_CASE("halton samples land in their regions") {
    for (const Vec& x : halton_annulus(3, 2.0, 3.0, 300)) {
        CHECK(x.norm() >= 2.0);
        CHECK(x.norm() <= 3.0);
    }
    for (const Vec& x : halton_ball(4, Vec::Ones(4), 0.5, 100)) CHECK((x - Vec::Ones(4)).norm() <= 0.5);
}
