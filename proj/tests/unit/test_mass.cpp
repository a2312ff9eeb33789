#include <doctest.h>

#include <cmath>

#include "c0mass/mass.hpp"

using namespace c0m;

TEST_CASE("normalization constant") {
    MassOptions o;
    // 1 / (4 pi (n - 1) omega_{n-1}); 1/(32 pi^2) in three dimensions
    CHECK(normalization_constant(3, o) == doctest::Approx(1.0 / (32.0 * M_PI * M_PI)));
    CHECK(normalization_constant(4, o) == doctest::Approx(1.0 / (4.0 * M_PI * 3.0 * 2.0 * M_PI * M_PI)));
    o.norm = Normalization::Unit;
    CHECK(normalization_constant(5, o) == 1.0);
    double c = 0.0;
    CHECK(parse_normalization("custom:2.5", c) == Normalization::Custom);
    CHECK(c == 2.5);
    CHECK_THROWS(parse_normalization("bogus", c));
}

TEST_CASE("surface mass of the leading-order Schwarzschild field") {
    // h = 2m |x|^{2-n} delta gives (d_i h_ij - d_j h_ii) x^j/|x| = 2m (n-1)(n-2) |x|^{1-n},
    // so the surface integral is 2m (n-1)(n-2) omega_{n-1} at every radius
    for (int n : {3, 4, 5}) {
        const double m = 0.7;
        auto g = make_schwarzschild_leading(n, m);
        double want = 2.0 * m * (n - 1) * (n - 2) * sphere_area(n);
        for (double r : {10.0, 40.0}) CHECK(local_mass_c2(*g, r) == doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(local_mass_c2(*make_schwarzschild_leading(3, 1.0), 30.0) == doctest::Approx(16.0 * M_PI).epsilon(1e-12));
}

TEST_CASE("flat space has zero mass") {
    BumpProfile phi = make_bump(0.95, 1.05);
    MassReport m = c0_local_mass(*make_flat(3), phi, 20.0);
    CHECK(m.unnormalized == 0.0);
    CHECK(m.normalized == 0.0);
}

TEST_CASE("the volume form is linear in h and agrees with the weighted average") {
    BumpProfile phi = make_bump(0.93, 1.06);
    auto a = make_power_decay(3, 0.3, 1.2);
    auto b = make_schwarzschild_leading(3, 0.5);
    double ma = c0_local_mass(*a, phi, 25.0).unnormalized;
    double mb = c0_local_mass(*b, phi, 25.0).unnormalized;
    double mab = c0_local_mass(*make_sum(a, b), phi, 25.0).unnormalized;
    CHECK(mab == doctest::Approx(ma + mb).epsilon(1e-12));
    CHECK(ma == doctest::Approx(weighted_average_mass(*a, phi.weight(), 25.0)).epsilon(1e-7));
}

TEST_CASE("mass scales like r^{n-2} under dilation") {
    // (lambda^* g) has h(lambda x); M(h(lambda .), r) = lambda^{2-n} M(h, lambda r)
    BumpProfile phi = make_bump(0.95, 1.05);
    auto g = make_power_decay(3, 0.2, 1.5);
    double lam = 3.0;
    double lhs = c0_local_mass(*make_scaled_pullback(g, lam), phi, 10.0).unnormalized;
    double rhs = c0_local_mass(*g, phi, 30.0).unnormalized / lam;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
}

TEST_CASE("limit extraction flags slow decay") {
    BumpProfile phi = make_bump(0.95, 1.05);
    std::vector<double> radii{25, 50, 100, 200, 400};
    AdmLimit fast = adm_limit_extract(*make_schwarzschild_leading(3, 1.0), [&](double) { return phi.weight(); },
                                      radii, 0.5, 1.0);
    CHECK(fast.converged);
    CHECK(fast.limit_unnormalized == doctest::Approx(16.0 * M_PI).epsilon(1e-6));
    AdmLimit slow = adm_limit_extract(*make_power_decay(3, 0.2, 0.4), [&](double) { return phi.weight(); },
                                      radii, 0.5, 0.4);
    CHECK(slow.divergent);
}
