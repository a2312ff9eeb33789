#include "c0mass/flow_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "c0mass/mass.hpp"
#include "c0mass/quadrature.hpp"

namespace c0m {

namespace {

std::vector<std::size_t> nodes_in_ball(const GridState& s, const Vec& c, double R) {
    std::vector<std::size_t> out;
    const std::size_t M = s.interior_count();
    for (std::size_t k = 0; k < M; ++k) {
        auto idx = s.unflat_interior(k);
        if ((s.coord(idx) - c).norm() <= R) out.push_back(s.flat(idx));
    }
    return out;
}

std::size_t nearest_node(const GridState& s, const Vec& x) {
    std::array<int, kMaxDim> idx{};
    for (int a = 0; a < s.n; ++a) {
        int i = static_cast<int>(std::lround((x(a) + s.L) / s.dx));
        idx[a] = std::max(1, std::min(i, s.N - 2));
    }
    return s.flat(idx);
}

double grad_sq(const GridState& s, std::size_t p, int order) {
    Jet J = s.jet_at(p, order);
    double g = 0.0;
    for (int a = 0; a < s.n; ++a) g += J.d[a].squaredNorm();
    return g;
}

// trapezoid in time of f over snapshots restricted to [lo, hi]
double time_integral(const std::vector<double>& t, const std::vector<double>& f, double lo, double hi) {
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        double a = std::max(lo, t[k]), b = std::min(hi, t[k + 1]);
        if (b <= a) continue;
        double span = t[k + 1] - t[k];
        auto lerp = [&](double x) { return f[k] + (f[k + 1] - f[k]) * (x - t[k]) / span; };
        acc += 0.5 * (b - a) * (lerp(a) + lerp(b));
    }
    return acc;
}

}  // namespace

XNormReport xnorm_diagnostic(const std::vector<GridState>& snaps, const std::vector<Vec>& centers,
                             const std::vector<double>& radii, int order) {
    XNormReport rep;
    if (snaps.empty()) return rep;
    const int n = snaps[0].n;
    rep.eps0 = snaps[0].sup_norm();
    for (const auto& s : snaps) rep.sup_term = std::max(rep.sup_term, s.sup_norm());
    std::vector<double> t;
    for (const auto& s : snaps) t.push_back(s.t);
    const double vol = std::pow(snaps[0].dx, n);
    for (const Vec& c : centers)
        for (double R : radii) {
            auto nodes = nodes_in_ball(snaps[0], c, R);
            if (nodes.empty()) continue;
            std::vector<double> f2(snaps.size()), fp(snaps.size());
            for (std::size_t k = 0; k < snaps.size(); ++k) {
                std::vector<double> a(nodes.size()), b(nodes.size());
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    double g2 = grad_sq(snaps[k], nodes[i], order);
                    a[i] = g2;
                    b[i] = std::pow(g2, 0.5 * (n + 4));
                }
                f2[k] = pairwise_sum(a.data(), a.size()) * vol;
                fp[k] = pairwise_sum(b.data(), b.size()) * vol;
            }
            double l2 = std::pow(R, -0.5 * n) * std::sqrt(time_integral(t, f2, 0.0, R * R));
            double lp = std::pow(R, 2.0 / (n + 4)) * std::pow(time_integral(t, fp, 0.5 * R * R, R * R), 1.0 / (n + 4));
            rep.l2_term = std::max(rep.l2_term, l2);
            rep.lp_term = std::max(rep.lp_term, lp);
        }
    rep.total = rep.sup_term + rep.l2_term + rep.lp_term;
    rep.ratio = rep.eps0 > 0.0 ? rep.total / rep.eps0 : 0.0;
    return rep;
}

std::vector<double> scalar_along_flow(const GridState& s, const std::vector<Vec>& pts, int order) {
    std::vector<double> out;
    for (const Vec& x : pts) out.push_back(scalar_curvature(s.jet_at(nearest_node(s, x), order)));
    return out;
}

double min_scalar_in_ball(const GridState& s, const Vec& c, double R, int order) {
    auto nodes = nodes_in_ball(s, c, R);
    if (nodes.empty()) nodes.push_back(nearest_node(s, c));
    std::vector<double> v(nodes.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = scalar_curvature(s.jet_at(nodes[i], order));
    return deterministic_min(v);
}

double min_scalar_in_annulus(const GridState& s, double a, double b, int order) {
    std::vector<std::size_t> nodes;
    const std::size_t M = s.interior_count();
    for (std::size_t k = 0; k < M; ++k) {
        auto idx = s.unflat_interior(k);
        double l = s.coord(idx).norm();
        if (l >= a && l <= b) nodes.push_back(s.flat(idx));
    }
    if (nodes.empty()) return std::numeric_limits<double>::infinity();
    std::vector<double> v(nodes.size());
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = scalar_curvature(s.jet_at(nodes[i], order));
    return deterministic_min(v);
}

BetaWeakProbe beta_weak_probe(const MetricField& g0, const Vec& y, const BetaProbeOptions& opt) {
    BetaWeakProbe P;
    P.beta = opt.beta;
    P.kappa0 = opt.kappa0;
    P.tol = opt.tol;
    P.C = opt.C;
    for (int j = opt.levels - 1; j >= 0; --j) P.t.push_back(opt.t0 * std::pow(4.0, -j));
    GridState s = GridState::from_field(g0, opt.N, opt.L, opt.exec);
    GridSolveOptions so;
    so.T = P.t.back();
    so.output_times = P.t;
    so.order = opt.order;
    so.exec = opt.exec;
    GridTrajectory tr = rdtf_solve(s, so);
    P.inf.assign(P.C.size(), std::vector<double>(P.t.size(), 0.0));
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < P.t.size(); ++k)
        for (std::size_t i = 0; i < P.C.size(); ++i) {
            double R = P.C[i] * std::pow(P.t[k], P.beta);
            double m = min_scalar_in_ball(tr.snapshots[k], y, R, opt.order);
            // larger balls contain the smaller ones
            if (i > 0) m = std::min(m, P.inf[i - 1][k]);
            P.inf[i][k] = m;
            worst = std::min(worst, m);
        }
    P.margin = worst - P.kappa0;
    P.pass = worst >= P.kappa0 - P.tol;
    return P;
}

BartnikCheck bartnik_identity_check(const MetricField& g, double r1, double r2, const BartnikOptions& opt) {
    const int n = g.dim();
    if (!(r2 > r1) || !(r1 > 0.0) || !g.domain().contains_radius(r1) || !g.domain().contains_radius(r2))
        throw Error("annulus outside field domain");
    MassOptions mo;
    mo.stencil = opt.stencil;
    mo.sphere_degree = opt.sphere_degree;
    mo.exec = opt.exec;
    BartnikCheck out;
    out.lhs = local_mass_c2(g, r2, mo) - local_mass_c2(g, r1, mo);
    AnnulusQuadrature q = make_annulus_quadrature(n, 1.0, r1, r2, opt.radial_order, opt.sphere_degree);
    auto pts = q.points();
    auto w = q.weights();
    std::vector<double> v(pts.size());
    auto body = [&](std::size_t k) {
        Jet J = g.jet(pts[k], opt.stencil, 2);
        double R = scalar_curvature(J);
        double QR = scalar_curvature_split(J).quadratic;
        v[k] = w[k] * (R - QR);
    };
    if (opt.exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::size_t k = 0; k < pts.size(); ++k) body(k);
    } else {
        for (std::size_t k = 0; k < pts.size(); ++k) body(k);
    }
    out.rhs = deterministic_sum(v, opt.exec);
    out.gap = std::abs(out.lhs - out.rhs);
    return out;
}

}  // namespace c0m
