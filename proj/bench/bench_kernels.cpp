#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "c0mass/grid_flow.hpp"
#include "c0mass/mass.hpp"
#include "c0mass/parallel.hpp"
#include "c0mass/radial_flow.hpp"

using namespace c0m;

namespace {

double seconds(const std::function<void()>& f, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int k = 0; k < reps; ++k) f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void report(const char* name, const std::function<void(Exec)>& f, int reps) {
    double s = seconds([&] { f(Exec::Serial); }, reps);
    double p = seconds([&] { f(Exec::Parallel); }, reps);
    std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2f\n", name, s, p, s / p);
}

}  // namespace

int main() {
    configure_threads();
    std::printf("threads: %d\n", thread_count());

    auto g = make_amplified(make_power_decay(3, 0.3, 1.0), 0.05);
    GridState grid = GridState::from_field(*g, 40, 4.0);
    GridState out;
    report("grid_rhs 40^3", [&](Exec e) { grid_rhs(grid, out, 4, e); }, 3);

    BumpProfile phi = make_bump(0.95, 1.05);
    auto sch = make_schwarzschild_isotropic(3, 1.0);
    report("c0_local_mass", [&](Exec e) {
        MassOptions o;
        o.exec = e;
        c0_local_mass(*sch, phi, 50.0, o);
    }, 5);

    ScalarFn A = [](double l) { return 0.05 * std::exp(-l * l / 8); };
    RadialState rs = RadialState::from_profile(3, 4096, 0.0, 20.0, InnerBoundary::Regular, A, A);
    std::vector<double> dA, dB;
    report("radial_rhs 4096", [&](Exec e) { radial_rhs(rs, dA, dB, e); }, 10);

    std::vector<double> v(1 << 22, 1e-3);
    report("deterministic_sum 4M", [&](Exec e) { deterministic_sum(v, e); }, 10);
    return 0;
}
