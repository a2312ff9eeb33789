#include "c0mass/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "c0mass/quadrature.hpp"
#include "c0mass/types.hpp"

namespace c0m {

double BumpProfile::operator()(double l) const {
    if (l <= a || l >= b) return 0.0;
    double s = (2.0 * l - a - b) / (b - a);
    double q = 1.0 - s * s;
    return std::exp(1.0 - 1.0 / q);
}

double BumpProfile::d1(double l) const {
    if (l <= a || l >= b) return 0.0;
    double k = 2.0 / (b - a);
    double s = (2.0 * l - a - b) / (b - a);
    double q = 1.0 - s * s;
    return (*this)(l) * (-2.0 * s / (q * q)) * k;
}

double BumpProfile::d2(double l) const {
    if (l <= a || l >= b) return 0.0;
    double k = 2.0 / (b - a);
    double s = (2.0 * l - a - b) / (b - a);
    double q = 1.0 - s * s;
    double q2 = q * q;
    return k * k * (*this)(l) * (4.0 * s * s / (q2 * q2) - 2.0 / q2 - 8.0 * s * s / (q2 * q));
}

double BumpProfile::d_ab() const { return std::min(a - 0.9, 1.1 - b); }

double BumpProfile::integral() const { return antiderivative(*this, b); }

std::string BumpProfile::id() const {
    std::ostringstream o;
    o.precision(17);
    o << "bump(" << a << "," << b << ")";
    return o.str();
}

RadialWeight BumpProfile::weight() const {
    RadialWeight w;
    BumpProfile self = *this;
    w.f = [self](double u) { return self(u); };
    w.df = [self](double u) { return self.d1(u); };
    w.integral = integral();
    // the profile is steep near its support ends; four panels keep a 32-point rule spectral
    for (int k = 0; k <= 4; ++k) w.breaks.push_back(a + k * (b - a) / 4.0);
    w.id = id();
    return w;
}

BumpProfile make_bump(double a, double b) {
    if (!(a > 0.9 && b < 1.1 && a < b)) throw Error("bump support must satisfy .9 < a < b < 1.1");
    return BumpProfile{a, b};
}

double antiderivative(const BumpProfile& phi, double l) {
    if (l <= phi.a) return 0.0;
    double hi = std::min(l, phi.b);
    double mid = 0.5 * (phi.a + hi);
    Rule1D g = composite_gauss_legendre({phi.a, mid, hi}, 48);
    double s = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * phi(g.x[i]);
    return s;
}

double theta_bar(const BumpProfile& phi, int n) {
    double d = phi.d_ab();
    return d * d / (2.0 * n);
}

double horizon(double r, double eta, double theta_ref, double r_ref) {
    return theta_ref * std::pow(r / r_ref, -eta);
}

namespace {

// Thomas algorithm; a sub, b diag, c super
void solve_tridiagonal(const std::vector<double>& a, const std::vector<double>& b,
                       const std::vector<double>& c, std::vector<double>& d) {
    const size_t n = b.size();
    std::vector<double> cp(n), dp(n);
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for (size_t i = 1; i < n; ++i) {
        double m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m;
    }
    d[n - 1] = dp[n - 1];
    for (size_t i = n - 1; i-- > 0;) d[i] = dp[i] - cp[i] * d[i + 1];
}

struct CubicSpline {
    double l0, dl;
    std::vector<double> y, M;

    CubicSpline(double l0_, double dl_, const std::vector<double>& v) : l0(l0_), dl(dl_), y(v), M(v.size(), 0.0) {
        const size_t n = v.size();
        if (n < 3) return;
        std::vector<double> a(n - 2, 1.0), b(n - 2, 4.0), c(n - 2, 1.0), d(n - 2);
        for (size_t i = 1; i + 1 < n; ++i) d[i - 1] = 6.0 * (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dl * dl);
        solve_tridiagonal(a, b, c, d);
        for (size_t i = 1; i + 1 < n; ++i) M[i] = d[i - 1];
    }
    int cell(double l, double& t) const {
        int j = static_cast<int>(std::floor((l - l0) / dl));
        j = std::max(0, std::min(j, static_cast<int>(y.size()) - 2));
        t = (l - l0) / dl - j;
        return j;
    }
    double eval(double l) const {
        if (l < l0 || l > l0 + dl * (y.size() - 1)) return 0.0;
        double t;
        int j = cell(l, t);
        double A = 1.0 - t, B = t;
        return A * y[j] + B * y[j + 1] + ((A * A * A - A) * M[j] + (B * B * B - B) * M[j + 1]) * dl * dl / 6.0;
    }
    double deriv(double l) const {
        if (l < l0 || l > l0 + dl * (y.size() - 1)) return 0.0;
        double t;
        int j = cell(l, t);
        double A = 1.0 - t, B = t;
        return (y[j + 1] - y[j]) / dl + ((1.0 - 3.0 * A * A) * M[j] + (3.0 * B * B - 1.0) * M[j + 1]) * dl / 6.0;
    }
};

double lagrange4(const std::vector<double>& v, double u, bool deriv, double dl) {
    // u in lattice units
    int n = static_cast<int>(v.size());
    int i0 = static_cast<int>(std::floor(u)) - 1;
    i0 = std::max(0, std::min(i0, n - 4));
    double out = 0.0;
    for (int p = 0; p < 4; ++p) {
        if (!deriv) {
            double w = 1.0;
            for (int q = 0; q < 4; ++q)
                if (q != p) w *= (u - (i0 + q)) / double(p - q);
            out += w * v[i0 + p];
        } else {
            double w = 0.0;
            for (int s = 0; s < 4; ++s) {
                if (s == p) continue;
                double t = 1.0 / double(p - s);
                for (int q = 0; q < 4; ++q)
                    if (q != p && q != s) t *= (u - (i0 + q)) / double(p - q);
                w += t;
            }
            out += w * v[i0 + p];
        }
    }
    return deriv ? out / dl : out;
}

}  // namespace

double TestFunctionFlow::at(double l, int level) const {
    double u = (l - l_min) / dl;
    if (u < 0.0 || u > cells) return 0.0;
    return lagrange4(values[level], u, false, dl);
}

double TestFunctionFlow::d_at(double l, int level) const {
    double u = (l - l_min) / dl;
    if (u < 0.0 || u > cells) return 0.0;
    return lagrange4(values[level], u, true, dl);
}

int TestFunctionFlow::level_for_time(double t) const {
    int best = 0;
    for (int k = 1; k < static_cast<int>(times.size()); ++k)
        if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
    return best;
}

double TestFunctionFlow::slice_integral(int level) const {
    // exact for the piecewise cubic interpolant on each cell
    static const Rule1D g = gauss_legendre(2);
    const double lo = 0.9, hi = 1.1;
    int j0 = static_cast<int>(std::floor((lo - l_min) / dl));
    int j1 = static_cast<int>(std::ceil((hi - l_min) / dl));
    double s = 0.0;
    for (int j = j0; j < j1; ++j) {
        double c0 = std::max(lo, l_min + j * dl), c1 = std::min(hi, l_min + (j + 1) * dl);
        if (c1 <= c0) continue;
        for (int q = 0; q < 2; ++q) {
            double x = 0.5 * (c0 + c1) + 0.5 * (c1 - c0) * g.x[q];
            s += 0.5 * (c1 - c0) * g.w[q] * at(x, level);
        }
    }
    return s;
}

std::vector<double> TestFunctionFlow::slice_integrals() const {
    std::vector<double> out;
    for (int k = 0; k < static_cast<int>(values.size()); ++k) out.push_back(slice_integral(k));
    return out;
}

RadialWeight TestFunctionFlow::weight_at_level(int level) const {
    // natural cubic spline through the level: C2, so the mass quadrature sees no
    // derivative kinks at the faces and df is the exact derivative of f
    auto sp = std::make_shared<CubicSpline>(l_min, dl, values[level]);
    RadialWeight w;
    w.f = [sp](double u) { return sp->eval(u); };
    w.df = [sp](double u) { return sp->deriv(u); };
    static const Rule1D g2 = gauss_legendre(2);
    const double lo = 0.9, hi = 1.1;
    int j0 = static_cast<int>(std::floor((lo - l_min) / dl));
    int j1 = static_cast<int>(std::ceil((hi - l_min) / dl));
    double s = 0.0;
    for (int j = j0; j < j1; ++j) {
        double c0 = std::max(lo, l_min + j * dl), c1 = std::min(hi, l_min + (j + 1) * dl);
        if (c1 <= c0) continue;
        for (int q = 0; q < 2; ++q) s += 0.5 * (c1 - c0) * g2.w[q] * sp->eval(0.5 * (c0 + c1) + 0.5 * (c1 - c0) * g2.x[q]);
    }
    w.integral = s;
    // one panel per lattice cell: the spline is a cubic there
    for (int j = j0; j <= j1; ++j) w.breaks.push_back(l_min + j * dl);
    w.panel_order = 3;
    std::ostringstream o;
    o.precision(17);
    o << phi.id() << "@theta=" << theta << ",t=" << times[level];
    w.id = o.str();
    return w;
}

TestFunctionFlow evolve_testfn(const BumpProfile& phi, double theta, int n, const LatticeSpec& spec) {
    if (n < 2) throw Error("dimension must be at least 2");
    if (!(phi.a > 0.9 && phi.b < 1.1 && phi.a < phi.b)) throw Error("invalid bump support");
    if (theta < 0.0) throw Error("horizon must be nonnegative");
    double tb = spec.theta_bar_override > 0.0 ? spec.theta_bar_override : theta_bar(phi, n);
    if (spec.enforce_theta_bar && theta > tb)
        throw Error("horizon exceeds the admissible bound d_{a,b}^2/(2n)");
    const int N = spec.cells;
    const double dl = (spec.l_max - spec.l_min) / N;
    if ((phi.b - phi.a) / dl < 16.0) throw Error("lattice too coarse: fewer than 16 nodes across the bump");
    const double spread = 10.0 * std::sqrt(theta);
    if (phi.a - spread < spec.l_min || phi.b + spread > spec.l_max)
        throw Error("horizon too large: support spreads beyond the lattice");

    TestFunctionFlow F;
    F.phi = phi;
    F.theta = theta;
    F.n = n;
    F.l_min = spec.l_min;
    F.dl = dl;
    F.cells = N;
    for (int j = 0; j <= N; ++j) F.faces.push_back(spec.l_min + j * dl);
    std::vector<double> exact(N + 1);
    for (int j = 0; j <= N; ++j) exact[j] = (j == 0 || j == N) ? 0.0 : phi(F.faces[j]);

    // cell-centred antiderivative, differenced to faces reproduces phi
    std::vector<double> u(N);
    u[0] = 0.0;
    for (int i = 1; i < N; ++i) u[i] = u[i - 1] + dl * exact[i];

    const int K = theta > 0.0 ? std::max(1, static_cast<int>(std::ceil(theta / (spec.dt_factor * dl * dl)))) : 0;
    const double dt = K > 0 ? theta / K : 0.0;
    F.dt = dt;

    // flux-form radial Laplacian on cells, zero flux at both ends
    std::vector<double> cw(N), lo(N), di(N), up(N);
    for (int i = 0; i < N; ++i) {
        double c = spec.l_min + (i + 0.5) * dl;
        double fl = (i == 0) ? 0.0 : std::pow(F.faces[i], n - 1);
        double fr = (i == N - 1) ? 0.0 : std::pow(F.faces[i + 1], n - 1);
        double s = 1.0 / (std::pow(c, n - 1) * dl * dl);
        lo[i] = fl * s;
        up[i] = fr * s;
        di[i] = -(fl + fr) * s;
    }
    auto faces_from = [&](const std::vector<double>& v) {
        std::vector<double> w(N + 1, 0.0);
        for (int j = 1; j < N; ++j) w[j] = (v[j] - v[j - 1]) / dl;
        return w;
    };
    const double nm1 = n - 1.0;
    auto M = [&](const std::vector<double>& w, int j) {
        double l = F.faces[j];
        return (w[j + 1] - 2.0 * w[j] + w[j - 1]) / (dl * dl) + nm1 / l * (w[j + 1] - w[j - 1]) / (2.0 * dl) -
               nm1 / (l * l) * w[j];
    };

    int stride = 1;
    if (K > 0 && spec.max_levels > 1) stride = std::max(1, (K + spec.max_levels - 2) / (spec.max_levels - 1));
    std::vector<std::vector<double>> levels_s{exact};
    std::vector<double> s_times{0.0};
    std::vector<double> steps_s;
    int last_stored = 0;

    auto boundary_value = [&](const std::vector<double>& w) {
        double m = 0.0;
        for (double l : {0.9, 1.1}) m = std::max(m, std::abs(lagrange4(w, (l - spec.l_min) / dl, false, dl)));
        return m;
    };
    F.boundary_sup = boundary_value(exact);
    F.min_value = *std::min_element(exact.begin(), exact.end());

    std::vector<double> wprev = faces_from(u), a(N), b(N), c(N), rhs(N);
    for (int i = 0; i < N; ++i) {
        a[i] = -0.5 * dt * lo[i];
        b[i] = 1.0 - 0.5 * dt * di[i];
        c[i] = -0.5 * dt * up[i];
    }
    for (int k = 1; k <= K; ++k) {
        for (int i = 0; i < N; ++i) {
            double Lu = di[i] * u[i];
            if (i > 0) Lu += lo[i] * u[i - 1];
            if (i < N - 1) Lu += up[i] * u[i + 1];
            rhs[i] = u[i] + 0.5 * dt * Lu;
        }
        solve_tridiagonal(a, b, c, rhs);
        u.swap(rhs);
        std::vector<double> w = faces_from(u);
        for (int j = 1; j < N; ++j) {
            double r = (w[j] - wprev[j]) / dt - 0.5 * (M(w, j) + M(wprev, j));
            F.max_residual = std::max(F.max_residual, std::abs(r));
            F.min_value = std::min(F.min_value, w[j]);
        }
        F.boundary_sup = std::max(F.boundary_sup, boundary_value(w));
        if (k % stride == 0 || k == K) {
            levels_s.push_back(w);
            s_times.push_back(k * dt);
            steps_s.push_back(k - last_stored);
            last_stored = k;
        }
        wprev.swap(w);
    }
    // t = theta - s, stored ascending in t
    for (size_t k = levels_s.size(); k-- > 0;) {
        F.values.push_back(levels_s[k]);
        F.times.push_back(k == 0 ? theta : theta - s_times[k]);
    }
    F.times.front() = K > 0 ? 0.0 : theta;
    for (size_t k = steps_s.size(); k-- > 0;) F.steps_between.push_back(steps_s[k]);
    return F;
}

double testfn_pde_residual(const TestFunctionFlow& flow) { return flow.max_residual; }

double boundary_constant(const TestFunctionFlow& flow) {
    if (flow.theta <= 0.0) return 0.0;
    double d = flow.phi.d_ab();
    return flow.boundary_sup * std::pow(flow.theta, 0.5 * flow.n) * std::exp(d * d / (4.0 * flow.theta));
}

}  // namespace c0m
