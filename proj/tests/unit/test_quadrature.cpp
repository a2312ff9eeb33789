#include <doctest.h>

#include <cmath>
#include <numeric>

#include "c0mass/charts.hpp"
#include "c0mass/quadrature.hpp"

using namespace c0m;

namespace {

double sum(const std::vector<double>& w) { return std::accumulate(w.begin(), w.end(), 0.0); }

// int over S^{n-1} of x_1^{2a} x_2^{2b}, via Gamma functions
double sphere_moment(int n, int a, int b) {
    double num = 2.0 * std::tgamma(a + 0.5) * std::tgamma(b + 0.5) * std::pow(std::tgamma(0.5), n - 2);
    return num / std::tgamma(a + b + 0.5 * n);
}

}  // namespace

TEST_CASE("Gauss-Legendre is exact to degree 2p - 1") {
    for (int p : {2, 5, 16, 32}) {
        Rule1D q = gauss_legendre(p, 0.5, 2.0);
        for (int d = 0; d <= 2 * p - 1; d += std::max(1, p / 4)) {
            double s = 0.0;
            for (size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::pow(q.x[i], d);
            double want = (std::pow(2.0, d + 1) - std::pow(0.5, d + 1)) / (d + 1);
            CHECK(s == doctest::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("Gegenbauer weights integrate the weight") {
    Rule1D q = gauss_gegenbauer(10, 1.0);
    // int (1 - t^2) dt = 4/3, int t^2 (1 - t^2) dt = 4/15
    CHECK(sum(q.w) == doctest::Approx(4.0 / 3).epsilon(1e-13));
    double s = 0.0;
    for (size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * q.x[i] * q.x[i];
    CHECK(s == doctest::Approx(4.0 / 15).epsilon(1e-13));
}

TEST_CASE("composite and trapezoid rules") {
    Rule1D c = composite_gauss_legendre({0.0, 0.3, 1.0, 2.5}, 4);
    CHECK(c.x.size() == 12);
    CHECK(sum(c.w) == doctest::Approx(2.5).epsilon(1e-14));
    Rule1D t = trapezoid(0.0, 1.0, 11);
    double s = 0.0;
    for (size_t i = 0; i < t.x.size(); ++i) s += t.w[i] * (3.0 * t.x[i] + 1.0);
    CHECK(s == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("sphere rules integrate monomials up to their degree") {
    for (int n : {3, 4, 5}) {
        SphereRule s = sphere_rule(n, 11);
        CHECK(sum(s.w) == doctest::Approx(sphere_area(n)).epsilon(1e-13));
        for (auto [a, b] : {std::pair{1, 0}, {2, 0}, {1, 1}, {2, 2}, {3, 1}}) {
            double acc = 0.0;
            for (size_t k = 0; k < s.nodes.size(); ++k)
                acc += s.w[k] * std::pow(s.nodes[k](0), 2 * a) * std::pow(s.nodes[k](1), 2 * b);
            CHECK(acc == doctest::Approx(sphere_moment(n, a, b)).epsilon(1e-12));
        }
        // odd moments vanish
        double odd = 0.0;
        for (size_t k = 0; k < s.nodes.size(); ++k) odd += s.w[k] * s.nodes[k](0) * std::pow(s.nodes[k](1), 2);
        CHECK(std::abs(odd) < 1e-14);
    }
}

TEST_CASE("rotated sphere rule keeps its exactness") {
    SphereRule s = rotate_rule(sphere_rule(3, 9), random_rotation(3, 8));
    double acc = 0.0;
    for (size_t k = 0; k < s.nodes.size(); ++k) {
        CHECK(s.nodes[k].norm() == doctest::Approx(1.0).epsilon(1e-14));
        acc += s.w[k] * std::pow(s.nodes[k](2), 4);
    }
    CHECK(acc == doctest::Approx(4.0 * M_PI / 5).epsilon(1e-13));
}

TEST_CASE("annulus quadrature reproduces the volume") {
    for (int n : {3, 4, 5}) {
        AnnulusQuadrature q = make_annulus_quadrature(n, 20.0, 0.9, 1.1, 8, 5);
        CHECK(sum(q.weights()) == doctest::Approx(annulus_volume(n, 18.0, 22.0)).epsilon(1e-12));
        CHECK(q.points().size() == q.weights().size());
    }
    CHECK(sphere_area(3) == doctest::Approx(4.0 * M_PI));
    CHECK(sphere_area(4) == doctest::Approx(2.0 * M_PI * M_PI));
}
