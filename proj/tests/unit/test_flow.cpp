#include <doctest.h>

#include <cmath>

#include "c0mass/grid_flow.hpp"
#include "c0mass/rdtf_kernel.hpp"

using namespace c0m;

namespace {

Mat test_h(const Vec& x) {
    Mat h(3, 3);
    double e = std::exp(-x.squaredNorm() / 2);
    h << 0.3 * e + 0.1 * x(0) * x(1), 0.1 * std::sin(x(2)), 0.05 * x(0) * e, 0.1 * std::sin(x(2)), -0.2 * e,
        0.1 * x(1) * x(2) * e, 0.05 * x(0) * e, 0.1 * x(1) * x(2) * e, 0.15 * std::cos(x(0)) * e;
    return h;
}

Mat metric(const Vec& x) { return Mat::Identity(3, 3) + test_h(x); }

const double kStep = 1e-3;

// dg[k] = d_k g by central differences
std::array<Mat, 3> dmetric(const Vec& x) {
    std::array<Mat, 3> d;
    for (int k = 0; k < 3; ++k) {
        Vec e = Vec::Zero(3);
        e(k) = kStep;
        d[k] = (metric(x + e) - metric(x - e)) / (2 * kStep);
    }
    return d;
}

// G[k](i,j) = Gamma^k_ij
std::array<Mat, 3> gamma(const Vec& x) {
    Mat gi = metric(x).inverse();
    auto d = dmetric(x);
    std::array<Mat, 3> G;
    for (int k = 0; k < 3; ++k) {
        G[k] = Mat::Zero(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) G[k](i, j) += 0.5 * gi(k, l) * (d[i](j, l) + d[j](i, l) - d[l](i, j));
    }
    return G;
}

Vec deturck(const Vec& x) {
    Mat gi = metric(x).inverse();
    auto G = gamma(x);
    Vec w = Vec::Zero(3);
    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) w(k) += gi(a, b) * G[k](a, b);
    return w;
}

// -2 Ric + L_W g, W^k = g^{pq} Gamma^k_pq, all by differences of the metric
Mat ricci_deturck(const Vec& x) {
    auto G = gamma(x);
    std::array<std::array<Mat, 3>, 3> dG;
    Mat dW(3, 3);
    for (int m = 0; m < 3; ++m) {
        Vec e = Vec::Zero(3);
        e(m) = kStep;
        auto Gp = gamma(x + e), Gm = gamma(x - e);
        for (int k = 0; k < 3; ++k) dG[m][k] = (Gp[k] - Gm[k]) / (2 * kStep);
        dW.col(m) = (deturck(x + e) - deturck(x - e)) / (2 * kStep);
    }
    Mat ric = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                ric(i, j) += dG[k][k](i, j) - dG[j][k](i, k);
                for (int l = 0; l < 3; ++l) ric(i, j) += G[k](k, l) * G[l](i, j) - G[k](j, l) * G[l](i, k);
            }
    Vec w = deturck(x);
    Mat g = metric(x);
    auto dg = dmetric(x);
    Mat lie = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int c = 0; c < 3; ++c) lie(i, j) += w(c) * dg[c](i, j) + g(c, j) * dW(c, i) + g(i, c) * dW(c, j);
    return -2.0 * ric + lie;
}

}  // namespace

TEST_CASE("flow kernel equals -2 Ric + L_W g") {
    auto f = std::make_shared<ClosedFormField>(3, Domain::full(), "test", test_h);
    DerivativeStencil st;
    st.spacing = 1e-3;
    for (auto [a, b, c] : {std::tuple{0.3, -0.4, 0.5}, {1.1, 0.2, -0.7}, {-0.5, 0.9, 0.1}}) {
        Vec x(3);
        x << a, b, c;
        Mat rhs = rdtf_rhs(f->jet(x, st, 2));
        CHECK((rhs - ricci_deturck(x)).norm() < 1e-5 * (1.0 + rhs.norm()));
    }
}

TEST_CASE("kernel terms: flat is a fixed point and the linear part is the Laplacian") {
    Jet J(3, 2);
    CHECK(rdtf_rhs(J).norm() == 0.0);
    const double eps = 1e-6;
    for (int k = 0; k < 3; ++k) J.dd[k][k] = eps * Mat::Identity(3, 3) * (k + 1.0);
    RdtfTerms t = rdtf_terms(J);
    CHECK((t.rhs - t.laplacian).norm() < 1e-10 * eps);
    CHECK((t.laplacian - 6.0 * eps * Mat::Identity(3, 3)).norm() < 1e-18);
}

TEST_CASE("grid lattice bookkeeping") {
    GridState s(3, 10, 2.0);
    CHECK(s.interior_count() == 512);
    auto idx = s.unflat_interior(0);
    CHECK(idx[0] == 1);
    CHECK(s.coord(idx)(0) == doctest::Approx(-2.0 + s.dx));
    CHECK(s.dx == doctest::Approx(4.0 / 9));
}

TEST_CASE("stable default step and the step sequence of the solver") {
    GridState s(3, 16, 2.0);
    CHECK(default_grid_dt(s) == doctest::Approx(0.8 * 2.0 / 16.0 * s.dx * s.dx));
    CHECK(default_grid_dt(s, 2) == doctest::Approx(0.8 * 2.0 / 12.0 * s.dx * s.dx));
    GridSolveOptions o;
    o.T = 0.05;
    o.diag_times = {0.01, 0.02};
    o.output_times = {0.03};
    GridTrajectory tr = rdtf_solve(s, o);
    CHECK(tr.diag_t.size() == 2);
    CHECK(tr.snapshots.size() == 2);
    CHECK(tr.snapshots.back().t == 0.05);
}

TEST_CASE("small data follows the heat equation") {
    // one Gaussian component; heat solution (s^2/q)^{3/2} exp(-|x|^2/(2q)), q = s^2 + 2t
    const double eps = 1e-5, s2 = 0.5, T = 0.05;
    auto g = std::make_shared<ClosedFormField>(3, Domain::full(), "g", [&](const Vec& x) {
        return (eps * std::exp(-x.squaredNorm() / (2 * s2)) * Mat::Identity(3, 3)).eval();
    });
    GridSolveOptions o;
    o.T = T;
    GridState fin = rdtf_solve(GridState::from_field(*g, 32, 4.0), o).snapshots.back();
    double q = s2 + 2 * T, err = 0.0;
    for (size_t k = 0; k < fin.interior_count(); ++k) {
        auto idx = fin.unflat_interior(k);
        Vec x = fin.coord(idx);
        double want = eps * std::pow(s2 / q, 1.5) * std::exp(-x.squaredNorm() / (2 * q));
        err = std::max(err, (fin.h_at(fin.flat(idx)) - want * Mat::Identity(3, 3)).norm());
    }
    CHECK(err < 2e-3 * eps);
}

TEST_CASE("blow-up and eps_bar guards") {
    auto big = make_power_decay(3, 0.5, 1.0);
    GridSolveOptions o;
    CHECK_THROWS_AS(rdtf_solve(GridState::from_field(*big, 12, 2.0), o), Error);
    auto small = make_amplified(make_power_decay(3, 0.5, 1.0), 0.01);
    GridState s = GridState::from_field(*small, 12, 2.0);
    o.dt = 50.0 * default_grid_dt(s);
    o.T = 200 * o.dt;
    CHECK_THROWS_AS(rdtf_solve(s, o), Error);
}
