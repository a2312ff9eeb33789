#pragma once

#include <vector>

#include "c0mass/types.hpp"

namespace c0m {

struct Rule1D {
    std::vector<double> x, w;
};

Rule1D gauss_legendre(int p, double a = -1.0, double b = 1.0);
// weight (1 - t^2)^alpha on [-1, 1], Golub-Welsch
Rule1D gauss_gegenbauer(int p, double alpha);
// p-point Gauss-Legendre on each panel between consecutive breakpoints
Rule1D composite_gauss_legendre(const std::vector<double>& breaks, int p);
// composite trapezoid, exact for piecewise linear
Rule1D trapezoid(double a, double b, int points);

// rule on the unit sphere S^{n-1}, exact for polynomials of total degree <= degree
struct SphereRule {
    int n = 3;
    int degree = 0;
    std::vector<Vec> nodes;
    std::vector<double> w;
};

SphereRule sphere_rule(int n, int degree);
SphereRule rotate_rule(const SphereRule& s, const Mat& O);

// omega_{n-1}: area of the unit sphere in R^n
double sphere_area(int n);
double annulus_volume(int n, double r_in, double r_out);

// volume nodes for A(0, a r, b r) plus the two boundary-sphere rules
struct AnnulusQuadrature {
    int n = 3;
    double r = 1.0, a = 0.9, b = 1.1;
    Rule1D radial;      // in |x|
    SphereRule sphere;
    std::vector<Vec> points() const;
    std::vector<double> weights() const;
};

AnnulusQuadrature make_annulus_quadrature(int n, double r, double a, double b, int radial_order,
                                          int sphere_degree,
                                          const std::vector<double>& rel_breaks = {});

}  // namespace c0m
