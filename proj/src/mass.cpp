#include "c0mass/mass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace c0m {

double normalization_constant(int n, const MassOptions& opt) {
    switch (opt.norm) {
        case Normalization::Standard: return 1.0 / (4.0 * M_PI * (n - 1) * sphere_area(n));
        case Normalization::Unit: return 1.0;
        case Normalization::Custom: return opt.custom_constant;
    }
    return 1.0;
}

Normalization parse_normalization(const std::string& s, double& custom) {
    if (s == "standard") return Normalization::Standard;
    if (s == "unit") return Normalization::Unit;
    if (s.rfind("custom:", 0) == 0) {
        custom = std::stod(s.substr(7));
        return Normalization::Custom;
    }
    throw Error("unknown normalization '" + s + "' (expected standard|unit|custom:<float>)");
}

namespace {

SphereRule working_sphere(int n, const MassOptions& opt) {
    SphereRule s = sphere_rule(n, opt.sphere_degree);
    if (opt.rotation) s = rotate_rule(s, *opt.rotation);
    return s;
}

void check_annulus(const MetricField& g, double lo, double hi) {
    if (!(lo > 0.0) || !g.domain().contains_radius(lo) || !g.domain().contains_radius(hi))
        throw Error("annulus outside field domain");
}

std::vector<double> sum_parallel(int count, const std::function<double(int)>& f, Exec exec) {
    std::vector<double> v(count);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < count; ++i) v[i] = f(i);
    } else {
        for (int i = 0; i < count; ++i) v[i] = f(i);
    }
    return v;
}

}  // namespace

double local_mass_c2(const MetricField& g, double r, const MassOptions& opt) {
    const int n = g.dim();
    check_annulus(g, r, r);
    SphereRule s = working_sphere(n, opt);
    const double area = std::pow(r, n - 1);
    auto term = [&](int k) {
        const Vec& w = s.nodes[k];
        Jet J = g.jet(r * w, opt.stencil, 1);
        double flux = 0.0;
        for (int j = 0; j < n; ++j) {
            double Y = 0.0;
            for (int i = 0; i < n; ++i) Y += J.d[i](i, j) - J.d[j](i, i);
            flux += Y * w(j);
        }
        return s.w[k] * area * flux;
    };
    auto v = sum_parallel(static_cast<int>(s.nodes.size()), term, opt.exec);
    return deterministic_sum(v, opt.exec);
}

MassReport c0_local_mass(const MetricField& g, const RadialWeight& phi, double r, const MassOptions& opt) {
    const int n = g.dim();
    if (phi.integral == 0.0) throw Error("test function has vanishing integral over (.9, 1.1)");
    check_annulus(g, 0.9 * r, 1.1 * r);
    AnnulusQuadrature q = make_annulus_quadrature(n, r, 0.9, 1.1, phi.panel_order > 0 ? phi.panel_order : opt.radial_order,
                                                opt.sphere_degree, phi.breaks);
    if (opt.rotation) q.sphere = rotate_rule(q.sphere, *opt.rotation);
    const int ns = static_cast<int>(q.sphere.nodes.size());
    const int nr = static_cast<int>(q.radial.x.size());

    std::vector<double> fu(nr), dfu(nr);
    for (int i = 0; i < nr; ++i) {
        fu[i] = phi.f(q.radial.x[i] / r);
        dfu[i] = phi.df(q.radial.x[i] / r);
    }
    auto vol = [&](int k) {
        int i = k / ns, j = k % ns;
        if (fu[i] == 0.0 && dfu[i] == 0.0) return 0.0;
        double rho = q.radial.x[i];
        const Vec& w = q.sphere.nodes[j];
        Mat h = g.h(rho * w);
        double tr = h.trace();
        double rad = w.dot(h * w);
        double c1 = (n - 2.0) / rho * fu[i] + dfu[i] / r;
        double c2 = fu[i] / rho - dfu[i] / r;
        return q.radial.w[i] * std::pow(rho, n - 1) * q.sphere.w[j] * (c1 * tr + c2 * rad);
    };
    auto vv = sum_parallel(nr * ns, vol, opt.exec);

    MassReport rep;
    rep.r = r;
    rep.phi_id = phi.id;
    rep.raw_volume = deterministic_sum(vv, opt.exec);

    double bsum = 0.0;
    for (int side = 0; side < 2; ++side) {
        double u = side == 0 ? 1.1 : 0.9;
        double sign = side == 0 ? 1.0 : -1.0;
        double fv = phi.f(u);
        if (fv == 0.0) continue;
        double rho = u * r;
        auto bt = [&](int j) {
            const Vec& w = q.sphere.nodes[j];
            Mat h = g.h(rho * w);
            return q.sphere.w[j] * (w.dot(h * w) - h.trace());
        };
        auto bv = sum_parallel(ns, bt, opt.exec);
        bsum += sign * fv * std::pow(rho, n - 1) * deterministic_sum(bv, opt.exec);
    }
    rep.raw_boundary = bsum;
    rep.unnormalized = (rep.raw_volume + rep.raw_boundary) / (r * phi.integral);
    rep.constant = normalization_constant(n, opt);
    rep.normalized = rep.unnormalized * rep.constant;
    return rep;
}

MassReport c0_local_mass(const MetricField& g, const BumpProfile& phi, double r, const MassOptions& opt) {
    return c0_local_mass(g, phi.weight(), r, opt);
}

double weighted_average_mass(const MetricField& g, const RadialWeight& phi, double r, const MassOptions& opt) {
    if (phi.integral == 0.0) throw Error("test function has vanishing integral over (.9, 1.1)");
    check_annulus(g, 0.9 * r, 1.1 * r);
    std::vector<double> br{0.9 * r};
    for (double u : phi.breaks)
        if (u > 0.9 && u < 1.1) br.push_back(u * r);
    br.push_back(1.1 * r);
    std::sort(br.begin(), br.end());
    Rule1D rad = composite_gauss_legendre(br, phi.panel_order > 0 ? phi.panel_order : opt.radial_order);
    std::vector<double> terms;
    for (size_t i = 0; i < rad.x.size(); ++i) {
        double f = phi.f(rad.x[i] / r);
        terms.push_back(f == 0.0 ? 0.0 : rad.w[i] * f * local_mass_c2(g, rad.x[i], opt));
    }
    return pairwise_sum(terms.data(), terms.size()) / (r * phi.integral);
}

AdmLimit adm_limit_extract(const MetricField& g, const std::function<RadialWeight(double)>& phi_for_radius,
                           const std::vector<double>& radii, double eta, double tau, const MassOptions& opt) {
    if (radii.size() < 3) throw Error("limit extraction needs at least 3 radii");
    for (size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1])) throw Error("radii must be increasing");
    const int n = g.dim();
    AdmLimit out;
    out.radii = radii;
    for (double r : radii) out.reports.push_back(c0_local_mass(g, phi_for_radius(r), r, opt));
    const size_t K = radii.size();
    out.correction_power = n - 2.0 - 2.0 * tau + eta;
    for (size_t k = 0; k + 1 < K; ++k) {
        double d = out.reports[k + 1].unnormalized - out.reports[k].unnormalized;
        out.increments.push_back(d);
        out.correction_c = std::max(out.correction_c, std::max(0.0, -d) / std::pow(radii[k], out.correction_power));
    }
    int run = 0;
    for (size_t k = 0; k + 1 < K; ++k) {
        double b = out.correction_c * std::pow(radii[k], out.correction_power);
        double c = out.increments[k] - b;
        out.corrected.push_back(c);
        double ref = std::abs(out.reports[k + 1].unnormalized);
        run = c > 1e-3 * ref ? run + 1 : 0;
        if (run >= 3) out.divergent = true;
    }
    const double C = out.reports[0].constant;
    if (out.divergent) {
        out.limit_unnormalized = std::numeric_limits<double>::infinity();
        out.limit_normalized = std::numeric_limits<double>::infinity();
        return out;
    }
    out.converged = true;
    double x0 = out.reports[K - 3].unnormalized, x1 = out.reports[K - 2].unnormalized,
           x2 = out.reports[K - 1].unnormalized;
    double den = (x2 - x1) - (x1 - x0);
    double lim = x2;
    if (den != 0.0) {
        double a = x2 - (x2 - x1) * (x2 - x1) / den;
        if (std::isfinite(a)) lim = a;
    }
    out.limit_unnormalized = lim;
    out.limit_normalized = lim * C;
    return out;
}

}  // namespace c0m
