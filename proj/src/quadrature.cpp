#include "c0mass/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace c0m {

Rule1D gauss_legendre(int p, double a, double b) {
    Rule1D r;
    r.x.resize(p);
    r.w.resize(p);
    for (int i = 0; i < (p + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (p + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= p; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = p * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute derivative at the converged root
        double p0 = 1.0, p1 = 0.0;
        for (int k = 1; k <= p; ++k) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = p * (z * p0 - p1) / (z * z - 1.0);
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[p - 1 - i] = z;
        r.w[i] = r.w[p - 1 - i] = w;
    }
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < p; ++i) {
        r.x[i] = mid + half * r.x[i];
        r.w[i] *= half;
    }
    return r;
}

Rule1D gauss_gegenbauer(int p, double alpha) {
    if (alpha == 0.0) return gauss_legendre(p);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(p, p);
    for (int k = 1; k < p; ++k) {
        double b = std::sqrt(k * (k + 2.0 * alpha) / ((2.0 * k + 2.0 * alpha) * (2.0 * k + 2.0 * alpha) - 1.0));
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    double mu0 = std::sqrt(M_PI) * std::tgamma(alpha + 1.0) / std::tgamma(alpha + 1.5);
    Rule1D r;
    r.x.resize(p);
    r.w.resize(p);
    for (int i = 0; i < p; ++i) {
        r.x[i] = es.eigenvalues()(i);
        double v = es.eigenvectors()(0, i);
        r.w[i] = mu0 * v * v;
    }
    // exact symmetry
    for (int i = 0; i < p / 2; ++i) {
        double x = 0.5 * (r.x[p - 1 - i] - r.x[i]);
        double w = 0.5 * (r.w[p - 1 - i] + r.w[i]);
        r.x[i] = -x;
        r.x[p - 1 - i] = x;
        r.w[i] = r.w[p - 1 - i] = w;
    }
    if (p % 2 == 1) r.x[p / 2] = 0.0;
    return r;
}

Rule1D composite_gauss_legendre(const std::vector<double>& breaks, int p) {
    Rule1D out;
    for (size_t k = 0; k + 1 < breaks.size(); ++k) {
        if (!(breaks[k + 1] > breaks[k])) continue;
        Rule1D g = gauss_legendre(p, breaks[k], breaks[k + 1]);
        out.x.insert(out.x.end(), g.x.begin(), g.x.end());
        out.w.insert(out.w.end(), g.w.begin(), g.w.end());
    }
    return out;
}

Rule1D trapezoid(double a, double b, int points) {
    Rule1D r;
    double h = (b - a) / (points - 1);
    for (int i = 0; i < points; ++i) {
        r.x.push_back(a + i * h);
        r.w.push_back((i == 0 || i == points - 1) ? 0.5 * h : h);
    }
    return r;
}

SphereRule sphere_rule(int n, int degree) {
    SphereRule s;
    s.n = n;
    s.degree = degree;
    if (n == 2) {
        int m = degree + 1;
        for (int k = 0; k < m; ++k) {
            double a = 2.0 * M_PI * (k + 0.5) / m;
            Vec v(2);
            v << std::cos(a), std::sin(a);
            s.nodes.push_back(v);
            s.w.push_back(2.0 * M_PI / m);
        }
        return s;
    }
    SphereRule sub = sphere_rule(n - 1, degree);
    Rule1D t = gauss_gegenbauer(degree / 2 + 1, 0.5 * (n - 3));
    for (size_t i = 0; i < t.x.size(); ++i) {
        double c = std::sqrt(std::max(0.0, 1.0 - t.x[i] * t.x[i]));
        for (size_t j = 0; j < sub.nodes.size(); ++j) {
            Vec v(n);
            v(0) = t.x[i];
            v.tail(n - 1) = c * sub.nodes[j];
            s.nodes.push_back(v);
            s.w.push_back(t.w[i] * sub.w[j]);
        }
    }
    return s;
}

SphereRule rotate_rule(const SphereRule& s, const Mat& O) {
    SphereRule r = s;
    for (auto& v : r.nodes) v = O * v;
    return r;
}

double sphere_area(int n) { return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n); }

double annulus_volume(int n, double r_in, double r_out) {
    return sphere_area(n) / n * (std::pow(r_out, n) - std::pow(r_in, n));
}

std::vector<Vec> AnnulusQuadrature::points() const {
    std::vector<Vec> p;
    p.reserve(radial.x.size() * sphere.nodes.size());
    for (double l : radial.x)
        for (const Vec& w : sphere.nodes) p.push_back(l * w);
    return p;
}

std::vector<double> AnnulusQuadrature::weights() const {
    std::vector<double> w;
    w.reserve(radial.x.size() * sphere.nodes.size());
    for (size_t i = 0; i < radial.x.size(); ++i)
        for (double ws : sphere.w) w.push_back(radial.w[i] * std::pow(radial.x[i], n - 1) * ws);
    return w;
}

AnnulusQuadrature make_annulus_quadrature(int n, double r, double a, double b, int radial_order,
                                          int sphere_degree, const std::vector<double>& rel_breaks) {
    AnnulusQuadrature q;
    q.n = n;
    q.r = r;
    q.a = a;
    q.b = b;
    std::vector<double> br{a * r};
    for (double u : rel_breaks)
        if (u > a && u < b) br.push_back(u * r);
    br.push_back(b * r);
    std::sort(br.begin(), br.end());
    q.radial = composite_gauss_legendre(br, radial_order);
    q.sphere = sphere_rule(n, sphere_degree);
    return q;
}

}  // namespace c0m
