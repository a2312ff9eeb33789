#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "c0mass/geometry.hpp"
#include "c0mass/quadrature.hpp"

namespace c0m {

using MapFn = std::function<Vec(const Vec&)>;
using DiffFn = std::function<Mat(const Vec&)>;

struct SmoothMap {
    int n = 3;
    Domain domain{};
    MapFn f;
    DiffFn df;  // empty: fourth-order central differences
    std::string name = "map";

    Vec operator()(const Vec& x) const { return f(x); }
    Mat diff(const Vec& x, double step = 1e-4) const;
};

struct EuclideanIsometry {
    Mat O;
    Vec v;

    static EuclideanIsometry identity(int n);
    Vec operator()(const Vec& x) const { return O * x + v; }
    EuclideanIsometry compose(const EuclideanIsometry& b) const;  // this o b
    EuclideanIsometry inverse() const;
    SmoothMap as_map() const;
};

Mat random_rotation(int n, unsigned seed);

// zeta(z) = c exp(-1/(1 - |z|^2)) on the unit ball, rho(l) the scale at |x| = l
struct MollifierProfile {
    int n = 3;
    double c = 1.0;
    std::function<double(double)> rho, drho;
    std::vector<Vec> z;        // quadrature nodes in the unit ball
    std::vector<double> w;     // weights including zeta and c
    std::vector<Vec> grad;     // w_k * grad zeta(z_k) / zeta(z_k)
};

MollifierProfile make_mollifier(int n, std::function<double(double)> rho, std::function<double(double)> drho,
                                int radial_order = 16, int sphere_degree = 11);
MollifierProfile constant_scale(int n, double rho, int radial_order = 16, int sphere_degree = 11);

double mollifier_mass(const MollifierProfile& p);  // quadrature value of int zeta

Vec mollify_map(const SmoothMap& F, const MollifierProfile& p, const Vec& x);
Mat mollify_differential(const SmoothMap& F, const MollifierProfile& p, const Vec& x);

// anchored orthogonal Procrustes on a Halton sample of B(x0, r)
EuclideanIsometry fit_isometry(const SmoothMap& F, const Vec& x0, double r, bool anchor = true,
                               int samples = 512);

struct BilipschitzProfile {
    double max_sv = 0.0, min_sv = 0.0, delta = 0.0;
    int samples = 0;
    bool ok(double d) const { return delta <= d; }
};

// singular values of dF on a Halton sample of the annulus A(0, a, b)
BilipschitzProfile bilipschitz_profile(const SmoothMap& F, double a, double b, int samples = 2000);
// fitted exponent of delta(r) over nested annuli A(r, 2r)
double bilipschitz_decay_exponent(const SmoothMap& F, const std::vector<double>& radii, int samples = 400);

// the proof's ramp, 0 on [0,1], 1/16 on [6,10], scaled by r
double gluing_rho(double l, double r);
double gluing_rho_d1(double l, double r);
// 1 on B(0, 9r), 0 outside B(0, 10r)
double gluing_chi(double l, double r);
double gluing_chi_d1(double l, double r);

struct GluedMap {
    SmoothMap map;
    EuclideanIsometry L;
    Vec x0;
    double r = 1.0;
    double sup_pullback_deviation = 0.0;
};

GluedMap glue_to_isometry(const SmoothMap& F, double r, int report_samples = 400, unsigned seed = 11,
                          int radial_order = 16, int sphere_degree = 11);

// (F^*g)(x) = dF^T g(F(x)) dF as a field; h = that - delta
FieldPtr pullback_metric(const SmoothMap& F, FieldPtr g);
// sup over samples of |F^* delta - delta|
double pullback_deviation(const SmoothMap& F, const std::vector<Vec>& pts);

struct InjectivityVerdict {
    bool pass = true;
    double min_ratio = 0.0;   // min |F(x)-F(y)| / |x-y|
    int det_sign = 0;
    long pairs = 0;
};

InjectivityVerdict injectivity_probe(const SmoothMap& F, double a, double b, long pairs, unsigned seed = 5,
                                     double min_ratio = 1e-3);

// quasi-random points
std::vector<Vec> halton_ball(int n, const Vec& c, double r, int count);
std::vector<Vec> halton_annulus(int n, double a, double b, int count, int skip = 0);

}  // namespace c0m
