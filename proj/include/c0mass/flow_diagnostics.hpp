#pragma once

#include <vector>

#include "c0mass/geometry.hpp"
#include "c0mass/grid_flow.hpp"
#include "c0mass/radial_flow.hpp"

namespace c0m {

struct XNormReport {
    double sup_term = 0.0;
    double l2_term = 0.0;
    double lp_term = 0.0;
    double total = 0.0;
    double eps0 = 0.0;
    double ratio = 0.0;  // total / eps0
};

// Finite-sample parabolic norm over the given centres and radii. The snapshots
// must include t = 0 and be ordered in time.
XNormReport xnorm_diagnostic(const std::vector<GridState>& snapshots, const std::vector<Vec>& centers,
                             const std::vector<double>& radii, int order = 4);

// R(g_t) at the lattice nodes nearest to the points
std::vector<double> scalar_along_flow(const GridState& s, const std::vector<Vec>& pts, int order = 4);
// minimum of R over lattice nodes in B(center, radius); nearest node if the ball holds none
double min_scalar_in_ball(const GridState& s, const Vec& center, double radius, int order = 4);
// min over interior nodes with |x| in [a, b]
double min_scalar_in_annulus(const GridState& s, double a, double b, int order = 4);

struct BetaWeakProbe {
    double beta = 0.25;
    double kappa0 = 0.0;
    double tol = 1e-3;
    std::vector<double> C, t;
    std::vector<std::vector<double>> inf;  // inf[i][k] over B(y, C_i t_k^beta)
    bool pass = true;
    double margin = 0.0;                   // min(inf) - kappa0
};

struct BetaProbeOptions {
    double beta = 0.25;
    double kappa0 = 0.0;
    double tol = 1e-3;
    std::vector<double> C{0.5, 1.0, 2.0, 4.0};
    double t0 = 0.05;
    int levels = 6;   // t = 4^{-j} t0
    int N = 48;
    double L = 4.0;
    int order = 4;
    Exec exec = Exec::Parallel;
};

// Falsifier: a finite sample of the beta-weak condition, never a certificate
BetaWeakProbe beta_weak_probe(const MetricField& g0, const Vec& y, const BetaProbeOptions& opt);

struct BartnikCheck {
    double lhs = 0.0, rhs = 0.0, gap = 0.0;
};

struct BartnikOptions {
    DerivativeStencil stencil{};
    int radial_order = 48;
    int sphere_degree = 23;
    Exec exec = Exec::Parallel;
};

BartnikCheck bartnik_identity_check(const MetricField& g, double r1, double r2,
                                    const BartnikOptions& opt = {});

}  // namespace c0m
