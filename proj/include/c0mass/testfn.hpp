#pragma once

#include <functional>
#include <string>
#include <vector>

namespace c0m {

// A radial weight phi(u), u = |x|/r, with derivative and the normalizing integral.
struct RadialWeight {
    std::function<double(double)> f, df;
    double integral = 0.0;            // int_{.9}^{1.1} phi
    std::vector<double> breaks;       // kinks or support ends inside (.9, 1.1)
    int panel_order = 0;              // > 0: points per panel instead of the mass radial order
    std::string id;
};

// e * exp(-1/(1 - s^2)), s = (2l - a - b)/(b - a), so the maximum is 1 at the midpoint
struct BumpProfile {
    double a = 0.95, b = 1.05;

    double operator()(double l) const;
    double d1(double l) const;
    double d2(double l) const;
    double d_ab() const;
    double integral() const;  // int_{.9}^{1.1}
    std::string id() const;
    RadialWeight weight() const;
};

BumpProfile make_bump(double a, double b);

// F[phi](l) = int_0^l phi
double antiderivative(const BumpProfile& phi, double l);

// largest admissible horizon, d_{a,b}^2 / (2n)
double theta_bar(const BumpProfile& phi, int n);

// theta(r) = theta_ref * (r / r_ref)^{-eta}; the reference is chosen so theta <= theta_bar
double horizon(double r, double eta, double theta_ref, double r_ref);

struct LatticeSpec {
    int cells = 2048;
    double l_min = 0.5, l_max = 1.5;
    double dt_factor = 1.0;   // dt = dt_factor * dl^2
    int max_levels = 256;     // stored time slices (the terminal one always included)
    bool enforce_theta_bar = true;
    double theta_bar_override = 0.0;  // > 0 replaces d^2/(2n)
};

struct TestFunctionFlow {
    BumpProfile phi;
    double theta = 0.0;
    int n = 3;
    double l_min = 0.5, dl = 0.0;
    int cells = 0;
    std::vector<double> faces;               // l_j = l_min + j dl
    std::vector<double> times;               // ascending t in [0, theta]
    std::vector<std::vector<double>> values; // values[k][j] = phi_theta(l_j, times[k])
    std::vector<double> steps_between;       // solver steps between consecutive stored levels
    double dt = 0.0;
    double max_residual = 0.0;               // over all solver steps
    double boundary_sup = 0.0;               // sup over {.9, 1.1} x [0, theta] of |phi_theta|
    double min_value = 0.0;

    double at(double l, int level) const;
    double d_at(double l, int level) const;
    // phi_theta(., t) on the stored level nearest to t, as a mass weight
    RadialWeight weight_at_level(int level) const;
    int level_for_time(double t) const;
    // int_{.9}^{1.1} phi_theta(l, t_k) dl per stored level
    std::vector<double> slice_integrals() const;
    double slice_integral(int level) const;
};

TestFunctionFlow evolve_testfn(const BumpProfile& phi, double theta, int n,
                               const LatticeSpec& spec = {});

// max residual of the discrete equation over the run
double testfn_pde_residual(const TestFunctionFlow& flow);

// boundary constant C = sup|phi_theta| * theta^{n/2} * exp(d^2/(4 theta))
double boundary_constant(const TestFunctionFlow& flow);

}  // namespace c0m
