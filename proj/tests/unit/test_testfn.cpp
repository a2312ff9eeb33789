#include <doctest.h>

#include <cmath>

#include "c0mass/testfn.hpp"

using namespace c0m;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int m = 4000) {
    double h = (b - a) / m, s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("bump profile shape") {
    BumpProfile p = make_bump(0.95, 1.05);
    CHECK(p(1.0) == doctest::Approx(1.0));
    CHECK(p(0.95) == 0.0);
    CHECK(p(1.06) == 0.0);
    CHECK(p.d1(1.0) == doctest::Approx(0.0));
    double h = 1e-6;
    CHECK(p.d1(0.98) == doctest::Approx((p(0.98 + h) - p(0.98 - h)) / (2 * h)).epsilon(1e-6));
    CHECK(p.d2(0.98) == doctest::Approx((p.d1(0.98 + h) - p.d1(0.98 - h)) / (2 * h)).epsilon(1e-5));
    CHECK(p.integral() == doctest::Approx(simpson([&](double l) { return p(l); }, 0.95, 1.05)).epsilon(1e-10));
    CHECK_THROWS(make_bump(0.85, 1.0));
    CHECK_THROWS(make_bump(1.0, 0.97));
}

TEST_CASE("admissible horizon") {
    BumpProfile p = make_bump(0.95, 1.08);
    // distance from the support to the annulus ends, squared over 2n
    CHECK(p.d_ab() == doctest::Approx(0.02));
    CHECK(theta_bar(p, 3) == doctest::Approx(0.0004 / 6));
    CHECK(horizon(40.0, 0.5, 1e-3, 10.0) == doctest::Approx(5e-4));
}

TEST_CASE("evolved test function basics") {
    BumpProfile p = make_bump(0.95, 1.05);
    double th = 0.5 * theta_bar(p, 3);
    TestFunctionFlow f = evolve_testfn(p, th, 3);
    CHECK(f.times.front() == 0.0);
    CHECK(f.times.back() == doctest::Approx(th));
    for (size_t j = 1; j + 1 < f.faces.size(); ++j) CHECK(f.values.back()[j] == p(f.faces[j]));
    CHECK(f.min_value > -1e-10);
    LatticeSpec fine;
    fine.cells = 4096;
    CHECK(testfn_pde_residual(evolve_testfn(p, th, 3, fine)) < 0.3 * testfn_pde_residual(f));
    CHECK(f.at(1.0, 0) < 1.0);
    // backwards heat spreads the bump: the weight at t = 0 is positive just outside the support
    CHECK(f.at(0.94, 0) > 0.0);
    CHECK_THROWS(evolve_testfn(p, 2.0 * theta_bar(p, 3), 3));
}

TEST_CASE("level weights are consistent with the stored values") {
    BumpProfile p = make_bump(0.94, 1.07);
    TestFunctionFlow f = evolve_testfn(p, 0.7 * theta_bar(p, 3), 3);
    for (int lev : {0, static_cast<int>(f.times.size()) / 2}) {
        RadialWeight w = f.weight_at_level(lev);
        CHECK(w.f(1.0) == doctest::Approx(f.at(1.0, lev)).epsilon(1e-9));
        double s = simpson(w.f, 0.9, 1.1);
        CHECK(w.integral == doctest::Approx(s).epsilon(1e-8));
        CHECK(f.slice_integral(lev) == doctest::Approx(s).epsilon(1e-6));
    }
}

TEST_CASE("boundary decay constant is finite and small horizons stay near the bump") {
    BumpProfile p = make_bump(0.95, 1.05);
    TestFunctionFlow f = evolve_testfn(p, 1e-5, 3);
    CHECK(std::isfinite(boundary_constant(f)));
    CHECK(std::abs(f.at(1.0, 0) - 1.0) < 0.2);
}
