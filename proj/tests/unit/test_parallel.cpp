#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <random>

#include <omp.h>

#include "c0mass/experiments.hpp"
#include "c0mass/grid_flow.hpp"
#include "c0mass/mass.hpp"
#include "c0mass/parallel.hpp"

using namespace c0m;

namespace {

struct Threads {
    int saved;
    explicit Threads(int k) : saved(omp_get_max_threads()) { omp_set_num_threads(k); }
    ~Threads() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_CASE("pairwise and chunked sums are exact on integers and thread independent") {
    std::vector<double> v(100003);
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 97);
    double want = 0.0;
    for (double x : v) want += x;
    CHECK(pairwise_sum(v.data(), v.size()) == want);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (double& x : v) x = nd(rng);
    double s1 = deterministic_sum(v, Exec::Serial);
    for (int k : {1, 2, 3, 7}) {
        Threads t(k);
        CHECK(deterministic_sum(v, Exec::Parallel) == s1);
        CHECK(deterministic_max(v, Exec::Parallel) == deterministic_max(v, Exec::Serial));
        CHECK(deterministic_min(v, Exec::Parallel) == deterministic_min(v, Exec::Serial));
    }
}

TEST_CASE("mass is bitwise identical serial and parallel") {
    BumpProfile phi = make_bump(0.95, 1.05);
    auto g = make_power_decay(3, 0.3, 1.1);
    MassOptions s, p;
    s.exec = Exec::Serial;
    double a = c0_local_mass(*g, phi, 30.0, s).unnormalized;
    Threads t(4);
    double b = c0_local_mass(*g, phi, 30.0, p).unnormalized;
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("grid step is bitwise identical serial and parallel") {
    auto g = make_amplified(make_power_decay(3, 0.3, 1.0), 0.05);
    GridState a = GridState::from_field(*g, 14, 2.0, Exec::Serial), b = a;
    double dt = default_grid_dt(a);
    Threads t(3);
    for (int k = 0; k < 5; ++k) {
        rdtf_step(a, dt, 4, Exec::Serial);
        rdtf_step(b, dt, 4, Exec::Parallel);
    }
    CHECK(a.bitwise_equal(b));
}

TEST_CASE("radial solve is bitwise identical serial and parallel") {
    ScalarFn A = [](double l) { return 0.03 * std::exp(-l * l / 8); };
    RadialState s = RadialState::from_profile(3, 200, 0.0, 10.0, InnerBoundary::Regular, A, A);
    RadialSolveOptions os, op;
    os.output_times = op.output_times = {0.3};
    os.exec = Exec::Serial;
    RadialState a = radial_rdtf_solve(s, os).back();
    Threads t(4);
    RadialState b = radial_rdtf_solve(s, op).back();
    CHECK(std::memcmp(a.A.data(), b.A.data(), a.A.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.B.data(), b.B.data(), a.B.size() * sizeof(double)) == 0);
}

TEST_CASE("thread cap from the environment") {
    Threads keep(omp_get_max_threads());
    setenv("C0MASS_THREADS", "1", 1);
    configure_threads();
    CHECK(thread_count() == 1);
    unsetenv("C0MASS_THREADS");
}
