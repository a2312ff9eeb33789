#include "c0mass/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "c0mass/quadrature.hpp"

namespace c0m {

double smooth_step(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

double smooth_step_d1(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
    double da = a / (s * s), db = -b / ((1.0 - s) * (1.0 - s));
    return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

double Cutoff::operator()(double l) const {
    double c = 1.0;
    if (U.r_in > 0.0) c *= smooth_step((l - V.r_in) / (U.r_in - V.r_in));
    if (std::isfinite(U.r_out)) c *= 1.0 - smooth_step((l - U.r_out) / (V.r_out - U.r_out));
    return c;
}

Cutoff make_cutoff(const Domain& U, const Domain& V) {
    bool ok = true;
    if (U.r_in > 0.0 && !(U.r_in > V.r_in)) ok = false;
    if (U.r_in == 0.0 && V.r_in > 0.0) ok = false;
    if (std::isfinite(U.r_out) && !(V.r_out > U.r_out)) ok = false;
    if (!std::isfinite(U.r_out) && std::isfinite(V.r_out)) ok = false;
    if (!ok) throw Error("U is not compactly contained in V");
    return Cutoff{U, V};
}

std::shared_ptr<const RadialProfileField> radialize(FieldPtr g) {
    if (auto r = std::dynamic_pointer_cast<const RadialProfileField>(g)) return r;
    const int n = g->dim();
    auto at = [g, n](double l) {
        Vec x = Vec::Zero(n);
        x(0) = l;
        return g->h(x);
    };
    return std::make_shared<RadialProfileField>(
        n, g->domain(), g->name(), [at](double l) { return at(l)(0, 0); },
        [at](double l) { return at(l)(1, 1); });
}

FieldPtr extend_metric(FieldPtr g, const Domain& V, const Domain& U, int samples, unsigned seed) {
    Cutoff chi = make_cutoff(U, V);
    const int n = g->dim();
    // audit |g - delta| < 1 and positivity on a sample of V
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    double lo = std::max(V.r_in, 1e-6);
    double hi = std::isfinite(V.r_out) ? V.r_out : 4.0 * std::max(1.0, V.r_in);
    for (int k = 0; k < samples; ++k) {
        Vec x(n);
        for (int a = 0; a < n; ++a) x(a) = nd(rng);
        x *= (lo + (hi - lo) * ud(rng)) / x.norm();
        if (!g->domain().contains(x)) continue;
        Mat h = g->h(x);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        double m = es.eigenvalues().cwiseAbs().maxCoeff();
        if (!(m < 1.0)) throw Error("metric not close enough to delta on V for a valid blend");
        if (!(1.0 + es.eigenvalues().minCoeff() > 0.0)) throw Error("non-positive-definite blend detected");
    }
    const std::string name = "ext(" + g->name() + ")";
    if (auto r = std::dynamic_pointer_cast<const RadialProfileField>(g)) {
        return make_radial(
            n,
            [r, chi](double l) {
                double c = chi(l);
                return c == 0.0 ? 0.0 : c * r->A(l);
            },
            [r, chi](double l) {
                double c = chi(l);
                return c == 0.0 ? 0.0 : c * r->B(l);
            },
            name);
    }
    return std::make_shared<ClosedFormField>(n, Domain::full(), name, [g, chi, n](const Vec& x) {
        double c = chi(x.norm());
        if (c == 0.0) return Mat::Zero(n, n).eval();
        if (c == 1.0) return g->h(x);
        return (c * g->h(x)).eval();
    });
}

CoupledTrajectory coupled_mass_trajectory(const RadialProfileField& g0, const TestFunctionFlow& flow, double r,
                                          const CoupledOptions& opt) {
    if (flow.n != g0.dim()) throw Error("test-function flow and metric disagree on dimension");
    CoupledTrajectory out;
    RadialState s = RadialState::from_field(g0, opt.N, opt.inner * r, opt.outer * r, InnerBoundary::Frozen);
    out.eps0 = s.sup_norm();
    RadialSolveOptions so;
    for (double tm : flow.times) so.output_times.push_back(r * r * tm);
    so.safety = opt.safety;
    so.exec = opt.exec;
    auto states = radial_rdtf_solve(s, so);
    for (std::size_t k = 0; k < states.size(); ++k) {
        FieldPtr f = states[k].field();
        out.t.push_back(so.output_times[k]);
        out.masses.push_back(c0_local_mass(*f, flow.weight_at_level(static_cast<int>(k)), r, opt.mass));
    }
    for (std::size_t k = 0; k + 1 < out.masses.size(); ++k)
        out.total_variation += std::abs(out.masses[k + 1].unnormalized - out.masses[k].unnormalized);
    return out;
}

MonotonicityResult monotonicity_experiment(FieldPtr g, double r, const std::vector<double>& r_prime,
                                           const BumpProfile& phi, const MonotonicityOptions& opt) {
    const int n = g->dim();
    MonotonicityResult res;
    res.r = r;
    res.power = n - 2.0 - 2.0 * opt.tau + opt.eta;
    for (double rp : r_prime)
        if (rp < 1.1 / 0.9 * r * (1.0 - 1e-12) || rp > 10.0 * r * (1.0 + 1e-12))
            throw Error("r' outside [1.1 r/.9, 10 r]");
    auto rad = radialize(g);
    // the data itself is held on the inner sphere; a flat interior would diffuse
    // its enclosed mass into the measurement annuli at these radii
    RadialState s = RadialState::from_field(*rad, opt.N, opt.inner * r, opt.extent * r, InnerBoundary::Frozen);
    res.t = opt.flow ? std::pow(r, 2.0 - opt.eta) : 0.0;
    if (opt.flow) {
        RadialSolveOptions so;
        so.output_times = {res.t};
        so.safety = opt.safety;
        so.exec = opt.exec;
        so.max_substep = std::pow(0.05 * r, 2);
        s = radial_rdtf_solve(s, so).back();
    }
    FieldPtr f = s.field();
    res.M_r = c0_local_mass(*f, phi, r, opt.mass).unnormalized;
    double worst = 0.0;
    for (double rp : r_prime) {
        double d = c0_local_mass(*f, phi, rp, opt.mass).unnormalized - res.M_r;
        res.r_prime.push_back(rp);
        res.dM.push_back(d);
        worst = std::min(worst, d);
    }
    res.fitted_c = -worst / std::pow(r, res.power);
    return res;
}

AffineResult affine_shift_experiment(FieldPtr g, const Vec& v, double r, double b, double r1, double r2,
                                     const BumpProfile& phi, double eta, double tau, const MassOptions& opt) {
    if (v.norm() > b * r * (1.0 + 1e-12)) throw Error("|v| exceeds b r");
    if (!(r1 > (1.0 + b) * r / 0.9)) throw Error("radii constraint r1 > (1+b) r/.9 violated");
    if (!(r2 > (b * r + 1.1 * r1) / 0.9)) throw Error("radii constraint r2 > (b r + 1.1 r1)/.9 violated");
    AffineResult out;
    out.M2 = c0_local_mass(*g, phi, r2, opt).unnormalized;
    out.M1 = c0_local_mass(*make_translated(g, v), phi, r1, opt).unnormalized;
    out.dM = out.M2 - out.M1;
    double p = g->dim() - 2.0 - 2.0 * tau + eta;
    out.fitted_c = std::max(0.0, -out.dM) / std::pow(r, p);
    return out;
}

std::vector<double> scalar_l1_annulus(const RadialState& s, double r_k, const std::vector<double>& r_prime) {
    std::vector<double> R = radial_scalar_curvature(s);
    const double area = sphere_area(s.n);
    std::vector<double> out;
    for (double rp : r_prime) {
        double a = 0.9 * r_k, b = 1.1 * rp;
        if (b > s.l_end() || a < s.l0) throw Error("annulus exceeds the radial domain");
        std::vector<double> terms;
        for (int j = 0; j < s.N; ++j) {
            double lo = s.l0 + j * s.dl, hi = lo + s.dl;
            double c0 = std::max(a, lo), c1 = std::min(b, hi);
            if (c1 <= c0) continue;
            terms.push_back(R[j] * std::pow(s.l(j), s.n - 1) * (c1 - c0));
        }
        out.push_back(area * pairwise_sum(terms.data(), terms.size()));
    }
    return out;
}

FinitenessResult finiteness_experiment(FieldPtr g, const std::vector<double>& r_k, const FinitenessOptions& opt) {
    FinitenessResult res;
    res.r_k = r_k;
    for (double r : r_k) {
        RadialState s;
        if (opt.frozen_inner) {
            s = RadialState::from_field(*radialize(g), opt.N, opt.cut_inner * r, opt.extent * r, InnerBoundary::Frozen);
        } else {
            FieldPtr ext = extend_metric(radialize(g), Domain::ball_complement(opt.cut_inner * r),
                                         Domain::ball_complement(opt.keep_inner * r));
            s = RadialState::from_field(*radialize(ext), opt.N, 0.0, opt.extent * r, InnerBoundary::Regular);
        }
        double t = std::pow(0.9 / 1.1 * r, 2.0 - opt.eta);
        RadialSolveOptions so;
        so.output_times = {t};
        so.safety = opt.safety;
        so.exec = opt.exec;
        so.max_substep = std::pow(0.05 * r, 2);
        s = radial_rdtf_solve(s, so).back();
        std::vector<double> rp;
        for (double f : opt.rprime_factors) rp.push_back(1.1 / 0.9 * r * f);
        auto I = scalar_l1_annulus(s, r, rp);
        res.t_k.push_back(t);
        res.integrals.push_back(I);
        double sup = 0.0;
        for (double v : I) sup = std::max(sup, std::abs(v));
        res.sup_over_rprime.push_back(sup);
    }
    res.bounded_decreasing = true;
    for (std::size_t k = 0; k < res.sup_over_rprime.size(); ++k) {
        if (!std::isfinite(res.sup_over_rprime[k])) res.bounded_decreasing = false;
        if (k > 0 && !(res.sup_over_rprime[k] < res.sup_over_rprime[k - 1])) res.bounded_decreasing = false;
    }
    // r' grows geometrically; a convergent integral shows shrinking increments,
    // a divergent one increments that do not shrink
    res.growth_flagged = !res.integrals.empty();
    for (const auto& I : res.integrals) {
        if (I.size() < 3) res.growth_flagged = false;
        for (std::size_t j = 0; j + 2 < I.size(); ++j) {
            double d0 = I[j + 1] - I[j], d1 = I[j + 2] - I[j + 1];
            if (!(d0 > 0.0 && d1 >= d0)) res.growth_flagged = false;
        }
    }
    return res;
}

}  // namespace c0m
