#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "c0mass/geometry.hpp"
#include "c0mass/grid_flow.hpp"
#include "c0mass/mass.hpp"
#include "c0mass/radial_flow.hpp"
#include "c0mass/testfn.hpp"

namespace c0m {

// smooth step: 0 for s <= 0, 1 for s >= 1
double smooth_step(double s);
double smooth_step_d1(double s);

// chi = 1 on U, 0 outside V, smooth in between
struct Cutoff {
    Domain U, V;
    double operator()(double l) const;
};

Cutoff make_cutoff(const Domain& U, const Domain& V);

// g0 = chi g + (1 - chi) delta. Radial-profile inputs stay radial.
FieldPtr extend_metric(FieldPtr g, const Domain& V, const Domain& U, int samples = 2000,
                       unsigned seed = 7);

// Radial-profile view of a spherically symmetric field, read off along e_1.
// The caller is responsible for the symmetry.
std::shared_ptr<const RadialProfileField> radialize(FieldPtr g);

struct CoupledTrajectory {
    std::vector<double> t;              // flow times r^2 * t_m
    std::vector<MassReport> masses;
    double total_variation = 0.0;
    double eps0 = 0.0;
};

struct CoupledOptions {
    int N = 1536;
    double inner = 0.4, outer = 1.6;    // solver domain in units of r
    double safety = 0.5;
    MassOptions mass{};
    Exec exec = Exec::Parallel;
};

// M(g_t, phi_theta(., t / r^2), r) along a radial flow started from g0
CoupledTrajectory coupled_mass_trajectory(const RadialProfileField& g0, const TestFunctionFlow& flow,
                                          double r, const CoupledOptions& opt = {});

struct MonotonicityResult {
    double r = 0.0, t = 0.0;
    std::vector<double> r_prime, dM;
    double M_r = 0.0;
    double fitted_c = 0.0;
    double power = 0.0;
};

struct MonotonicityOptions {
    double eta = 0.5;
    double tau = 1.0;
    double inner = 0.25;                         // frozen inner sphere, in units of r
    double extent = 13.0;                        // radial domain [inner r, extent r]
    int N = 2048;
    double safety = 0.5;
    bool flow = true;
    MassOptions mass{};
    Exec exec = Exec::Parallel;
};

MonotonicityResult monotonicity_experiment(FieldPtr g, double r, const std::vector<double>& r_prime,
                                           const BumpProfile& phi, const MonotonicityOptions& opt = {});

struct AffineResult {
    double M1 = 0.0, M2 = 0.0, dM = 0.0, fitted_c = 0.0;
};

AffineResult affine_shift_experiment(FieldPtr g, const Vec& v, double r, double b, double r1, double r2,
                                     const BumpProfile& phi, double eta, double tau,
                                     const MassOptions& opt = {});

// int over A(0, .9 r_k, 1.1 r') of R(g_t), one value per r'
std::vector<double> scalar_l1_annulus(const RadialState& s, double r_k, const std::vector<double>& r_prime);

struct FinitenessResult {
    std::vector<double> r_k, t_k;
    std::vector<std::vector<double>> integrals;   // [k][r']
    std::vector<double> sup_over_rprime;
    bool bounded_decreasing = false;
    bool growth_flagged = false;
};

struct FinitenessOptions {
    double eta = 0.5;
    // frozen: the data is held on |x| = cut_inner r; otherwise the cutoff
    // extension with a flat interior and a regular origin
    bool frozen_inner = true;
    double cut_inner = 0.25, keep_inner = 0.35;
    double extent = 12.0;
    int N = 2048;
    double safety = 0.5;
    std::vector<double> rprime_factors{1.0, 2.0, 4.0, 8.0};  // times 1.1/.9 r_k
    Exec exec = Exec::Parallel;
};

FinitenessResult finiteness_experiment(FieldPtr g, const std::vector<double>& r_k,
                                       const FinitenessOptions& opt = {});

}  // namespace c0m
