#include "c0mass/charts.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "c0mass/experiments.hpp"

namespace c0m {

Mat SmoothMap::diff(const Vec& x, double step) const {
    if (df) return df(x);
    Mat J(n, n);
    double s = step * std::max(1.0, x.norm());
    for (int k = 0; k < n; ++k) {
        Vec e = unit_vector(n, k) * s;
        J.col(k) = (8.0 * (f(x + e) - f(x - e)) - (f(x + 2.0 * e) - f(x - 2.0 * e))) / (12.0 * s);
    }
    return J;
}

EuclideanIsometry EuclideanIsometry::identity(int n) { return {Mat::Identity(n, n), Vec::Zero(n)}; }

EuclideanIsometry EuclideanIsometry::compose(const EuclideanIsometry& b) const {
    return {O * b.O, O * b.v + v};
}

EuclideanIsometry EuclideanIsometry::inverse() const {
    Mat Ot = O.transpose();
    return {Ot, -(Ot * v)};
}

SmoothMap EuclideanIsometry::as_map() const {
    EuclideanIsometry L = *this;
    SmoothMap m;
    m.n = static_cast<int>(O.rows());
    m.f = [L](const Vec& x) { return L(x); };
    m.df = [L](const Vec&) { return L.O; };
    m.name = "isometry";
    return m;
}

Mat random_rotation(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXd R = qr.matrixQR();
    for (int j = 0; j < n; ++j)
        if (R(j, j) < 0) Q.col(j) *= -1.0;
    if (Q.determinant() < 0) Q.col(0) *= -1.0;
    return Mat(Q);
}

MollifierProfile make_mollifier(int n, std::function<double(double)> rho, std::function<double(double)> drho,
                                int radial_order, int sphere_degree) {
    MollifierProfile p;
    p.n = n;
    p.rho = std::move(rho);
    p.drho = std::move(drho);
    Rule1D rad = gauss_legendre(radial_order, 0.0, 1.0);
    SphereRule sph = sphere_rule(n, sphere_degree);
    double total = 0.0;
    for (std::size_t i = 0; i < rad.x.size(); ++i) {
        double s = rad.x[i];
        double q = 1.0 - s * s;
        double zeta = std::exp(-1.0 / q);
        for (std::size_t j = 0; j < sph.nodes.size(); ++j) {
            double w = rad.w[i] * std::pow(s, n - 1) * sph.w[j] * zeta;
            p.z.push_back(s * sph.nodes[j]);
            p.w.push_back(w);
            p.grad.push_back(w * (-2.0 / (q * q)) * (s * sph.nodes[j]));
            total += w;
        }
    }
    p.c = 1.0 / total;
    for (auto& w : p.w) w *= p.c;
    for (auto& g : p.grad) g *= p.c;
    // discrete integration by parts: sum z (x) grad zeta = -I exactly on this rule
    double zg = 0.0;
    for (std::size_t k = 0; k < p.z.size(); ++k) zg += p.z[k].dot(p.grad[k]);
    double gamma = -n / zg;
    for (auto& g : p.grad) g *= gamma;
    return p;
}

MollifierProfile constant_scale(int n, double rho, int radial_order, int sphere_degree) {
    return make_mollifier(
        n, [rho](double) { return rho; }, [](double) { return 0.0; }, radial_order, sphere_degree);
}

double mollifier_mass(const MollifierProfile& p) {
    return pairwise_sum(p.w.data(), p.w.size());
}

Vec mollify_map(const SmoothMap& F, const MollifierProfile& p, const Vec& x) {
    const double rho = p.rho(x.norm());
    Vec Fx = F(x);
    if (rho == 0.0) return Fx;
    Vec acc = Vec::Zero(Fx.size());
    for (std::size_t k = 0; k < p.z.size(); ++k) acc += p.w[k] * (F(x - rho * p.z[k]) - Fx);
    return Fx + acc;
}

Mat mollify_differential(const SmoothMap& F, const MollifierProfile& p, const Vec& x) {
    const double l = x.norm();
    const double rho = p.rho(l);
    if (rho == 0.0) throw Error("mollification scale vanishes at x; use the map's own differential");
    // below this the differences F(x - rho z) - F(x) drown in roundoff; F_rho and F
    // then agree to O(rho^2 |d^2 F|) and the rho' terms are O(rho')
    if (rho < 1e-7 * std::max(1.0, l) && std::abs(p.drho(l)) < 1e-7) return F.diff(x);
    const double dr = p.drho(l);
    const int n = p.n;
    Vec xh = l > 0.0 ? Vec(x / l) : Vec::Zero(n);
    Vec Fx = F(x);
    Mat D = Mat::Zero(Fx.size(), n);
    for (std::size_t k = 0; k < p.z.size(); ++k) {
        Vec dF = F(x - rho * p.z[k]) - Fx;
        const Vec& g = p.grad[k];
        double zg = p.z[k].dot(g);
        for (int j = 0; j < n; ++j) {
            double ker = -n * dr * xh(j) / rho * p.w[k] + g(j) / rho - zg * dr * xh(j) / rho;
            D.col(j) += ker * dF;
        }
    }
    return D;
}

namespace {

double radical_inverse(unsigned long i, unsigned base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

constexpr unsigned kPrimes[kMaxDim] = {2, 3, 5, 7, 11};

}  // namespace

std::vector<Vec> halton_ball(int n, const Vec& c, double r, int count) {
    std::vector<Vec> out;
    for (unsigned long i = 1; static_cast<int>(out.size()) < count; ++i) {
        Vec u(n);
        for (int a = 0; a < n; ++a) u(a) = 2.0 * radical_inverse(i, kPrimes[a]) - 1.0;
        if (u.norm() <= 1.0) out.push_back(c + r * u);
    }
    return out;
}

std::vector<Vec> halton_annulus(int n, double a, double b, int count, int skip) {
    std::vector<Vec> out;
    for (unsigned long i = 1 + skip; static_cast<int>(out.size()) < count; ++i) {
        Vec u(n);
        for (int k = 0; k < n; ++k) u(k) = (2.0 * radical_inverse(i, kPrimes[k]) - 1.0) * b;
        double l = u.norm();
        if (l >= a && l <= b) out.push_back(u);
    }
    return out;
}

EuclideanIsometry fit_isometry(const SmoothMap& F, const Vec& x0, double r, bool anchor, int samples) {
    const int n = F.n;
    auto pts = halton_ball(n, x0, r, samples);
    std::vector<Vec> img;
    for (const Vec& p : pts) img.push_back(F(p));
    Vec cp = x0, cq = F(x0);
    if (!anchor) {
        cp = Vec::Zero(n);
        cq = Vec::Zero(n);
        for (std::size_t k = 0; k < pts.size(); ++k) {
            cp += pts[k];
            cq += img[k];
        }
        cp /= pts.size();
        cq /= pts.size();
    }
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t k = 0; k < pts.size(); ++k) H += (img[k] - cq) * (pts[k] - cp).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    auto sv = svd.singularValues();
    if (!(sv(n - 1) > 1e-12 * sv(0))) throw Error("degenerate sample configuration in isometry fit");
    Eigen::MatrixXd U = svd.matrixU(), V = svd.matrixV();
    double want = F.diff(x0).determinant() < 0.0 ? -1.0 : 1.0;
    double have = (U * V.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    Eigen::MatrixXd D = Eigen::MatrixXd::Identity(n, n);
    D(n - 1, n - 1) = want * have;
    EuclideanIsometry L;
    L.O = Mat(U * D * V.transpose());
    L.v = cq - L.O * cp;
    return L;
}

BilipschitzProfile bilipschitz_profile(const SmoothMap& F, double a, double b, int samples) {
    BilipschitzProfile bp;
    bp.samples = samples;
    bp.min_sv = std::numeric_limits<double>::infinity();
    for (const Vec& x : halton_annulus(F.n, a, b, samples)) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(F.diff(x)));
        auto s = svd.singularValues();
        bp.max_sv = std::max(bp.max_sv, s(0));
        bp.min_sv = std::min(bp.min_sv, s(s.size() - 1));
    }
    bp.delta = std::max(bp.max_sv - 1.0, 1.0 / bp.min_sv - 1.0);
    return bp;
}

double bilipschitz_decay_exponent(const SmoothMap& F, const std::vector<double>& radii, int samples) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int m = static_cast<int>(radii.size());
    for (double r : radii) {
        double d = bilipschitz_profile(F, r, 2.0 * r, samples).delta;
        double x = std::log(r), y = std::log(d);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return -slope;
}

double gluing_rho(double l, double r) {
    double u = l / r;
    if (u <= 1.0) return 0.0;
    if (u >= 6.0) return r / 16.0;
    double q = 1.0 - (6.0 - u) / 5.0;
    return r * std::exp(1.0) / 16.0 * std::exp(-1.0 / q);
}

double gluing_rho_d1(double l, double r) {
    double u = l / r;
    if (u <= 1.0 || u >= 6.0) return 0.0;
    double q = 1.0 - (6.0 - u) / 5.0;
    return std::exp(1.0) / 16.0 * std::exp(-1.0 / q) / (q * q) / 5.0;
}

double gluing_chi(double l, double r) { return 1.0 - smooth_step(l / r - 9.0); }

double gluing_chi_d1(double l, double r) { return -smooth_step_d1(l / r - 9.0) / r; }

double pullback_deviation(const SmoothMap& F, const std::vector<Vec>& pts) {
    double m = 0.0;
    for (const Vec& x : pts) {
        Mat J = F.diff(x);
        m = std::max(m, (J.transpose() * J - Mat::Identity(F.n, F.n)).norm());
    }
    return m;
}

GluedMap glue_to_isometry(const SmoothMap& F, double r, int report_samples, unsigned seed, int radial_order,
                          int sphere_degree) {
    (void)seed;
    const int n = F.n;
    GluedMap G;
    G.r = r;
    G.x0 = 9.5 * r * unit_vector(n, 0);
    auto prof = std::make_shared<MollifierProfile>(make_mollifier(
        n, [r](double l) { return gluing_rho(l, r); }, [r](double l) { return gluing_rho_d1(l, r); },
        radial_order, sphere_degree));
    // local condition near the anchor and the image-ball room are the caller's inputs;
    // the fit is taken on F itself so that L(x0) = F(x0)
    G.L = fit_isometry(F, G.x0, r / 16.0, true);
    const EuclideanIsometry L = G.L;
    const SmoothMap Fc = F;
    SmoothMap out;
    out.n = n;
    out.domain = F.domain;
    out.name = "glued(" + F.name + ")";
    out.f = [Fc, prof, L, r](const Vec& x) -> Vec {
        const double l = x.norm();
        const double chi = gluing_chi(l, r);
        if (chi == 0.0) return L(x);
        Vec m = mollify_map(Fc, *prof, x);
        if (chi == 1.0) return m;
        return chi * m + (1.0 - chi) * L(x);
    };
    out.df = [Fc, prof, L, r, n](const Vec& x) -> Mat {
        const double l = x.norm();
        const double chi = gluing_chi(l, r);
        if (chi == 0.0) return L.O;
        Mat dm = prof->rho(l) == 0.0 ? Fc.diff(x) : mollify_differential(Fc, *prof, x);
        if (chi == 1.0) return dm;
        Vec diff = mollify_map(Fc, *prof, x) - L(x);
        Vec gchi = (l > 0.0 ? Vec(x / l) : Vec::Zero(n)) * gluing_chi_d1(l, r);
        return chi * dm + (1.0 - chi) * L.O + diff * gchi.transpose();
    };
    G.map = out;
    if (report_samples > 0)
        G.sup_pullback_deviation = pullback_deviation(out, halton_annulus(n, r / 10.0, 11.0 * r, report_samples));
    return G;
}

FieldPtr pullback_metric(const SmoothMap& F, FieldPtr g) {
    const int n = F.n;
    SmoothMap Fc = F;
    return std::make_shared<ClosedFormField>(n, F.domain, "pullback(" + g->name() + ")", [Fc, g, n](const Vec& x) {
        Mat J = Fc.diff(x);
        Mat gm = Mat::Identity(n, n) + g->h(Fc(x));
        return (J.transpose() * gm * J - Mat::Identity(n, n)).eval();
    });
}

InjectivityVerdict injectivity_probe(const SmoothMap& F, double a, double b, long pairs, unsigned seed,
                                     double min_ratio) {
    InjectivityVerdict v;
    v.pairs = pairs;
    const int n = F.n;
    int count = static_cast<int>(std::min<long>(4000, std::max<long>(64, 2 * std::sqrt(double(pairs)) + 1)));
    auto pts = halton_annulus(n, a, b, count);
    std::vector<Vec> img;
    int pos = 0, neg = 0;
    for (const Vec& p : pts) {
        img.push_back(F(p));
        double d = F.diff(p).determinant();
        if (d > 0) ++pos;
        else if (d < 0) ++neg;
    }
    v.det_sign = (neg == 0 && pos > 0) ? 1 : (pos == 0 && neg > 0) ? -1 : 0;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, count - 1);
    v.min_ratio = std::numeric_limits<double>::infinity();
    for (long k = 0; k < pairs; ++k) {
        int i = pick(rng), j = pick(rng);
        if (i == j) j = (j + 1) % count;
        double ratio = (img[i] - img[j]).norm() / (pts[i] - pts[j]).norm();
        v.min_ratio = std::min(v.min_ratio, ratio);
    }
    v.pass = v.det_sign != 0 && v.min_ratio >= min_ratio;
    return v;
}

}  // namespace c0m
