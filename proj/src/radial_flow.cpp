#include "c0mass/radial_flow.hpp"

#include <algorithm>
#include <cmath>

#include "c0mass/rdtf_kernel.hpp"

namespace c0m {

double RadialState::A_ext(int j) const {
    if (j >= 0 && j < N) return A[j];
    if (j >= N) return gA_out[j - N];
    if (inner == InnerBoundary::Regular) return A[-j - 1];
    return gA_in[-j - 1];
}

double RadialState::B_ext(int j) const {
    if (j >= 0 && j < N) return B[j];
    if (j >= N) return gB_out[j - N];
    if (inner == InnerBoundary::Regular) return B[-j - 1];
    return gB_in[-j - 1];
}

namespace {

template <class F>
double interp(const RadialState& s, double l, F ext) {
    double u = (l - s.l0) / s.dl - 0.5;
    int i0 = static_cast<int>(std::floor(u)) - 1;
    i0 = std::max(-2, std::min(i0, s.N - 2));
    double out = 0.0;
    for (int p = 0; p < 4; ++p) {
        double w = 1.0;
        for (int q = 0; q < 4; ++q)
            if (q != p) w *= (u - (i0 + q)) / double(p - q);
        out += w * ext(i0 + p);
    }
    return out;
}

}  // namespace

double RadialState::A_at(double l) const {
    return interp(*this, l, [this](int j) { return A_ext(j); });
}

double RadialState::B_at(double l) const {
    return interp(*this, l, [this](int j) { return B_ext(j); });
}

double RadialState::sup_norm() const {
    double m = 0.0;
    for (int j = 0; j < N; ++j) m = std::max(m, std::sqrt(A[j] * A[j] + (n - 1) * B[j] * B[j]));
    return m;
}

FieldPtr RadialState::field(const std::string& name) const {
    auto self = std::make_shared<RadialState>(*this);
    Domain d = Domain::annulus(l0, l_end());
    return make_radial(
        n, [self](double l) { return self->A_at(l); }, [self](double l) { return self->B_at(l); }, name, d);
}

RadialState RadialState::from_profile(int n, int N, double l0, double l1, InnerBoundary inner,
                                      const ScalarFn& A, const ScalarFn& B) {
    RadialState s;
    s.n = n;
    s.N = N;
    s.inner = inner;
    if (inner == InnerBoundary::Regular) l0 = 0.0;
    s.l0 = l0;
    s.dl = (l1 - l0) / N;
    s.A.resize(N);
    s.B.resize(N);
    for (int j = 0; j < N; ++j) {
        s.A[j] = A(s.l(j));
        s.B[j] = B(s.l(j));
    }
    for (int g = 0; g < 2; ++g) {
        s.gA_out[g] = A(s.l(N + g));
        s.gB_out[g] = B(s.l(N + g));
        if (inner == InnerBoundary::Frozen) {
            s.gA_in[g] = A(s.l(-g - 1));
            s.gB_in[g] = B(s.l(-g - 1));
        }
    }
    return s;
}

RadialState RadialState::from_field(const RadialProfileField& g, int N, double l0, double l1,
                                    InnerBoundary inner) {
    return from_profile(
        g.dim(), N, l0, l1, inner, [&g](double l) { return g.A(l); }, [&g](double l) { return g.B(l); });
}

Jet radial_node_jet(const RadialState& s, int j) {
    static constexpr double w1[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    static constexpr double w2[5] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
    double a1 = 0, a2 = 0, b1 = 0, b2 = 0;
    for (int o = 0; o < 5; ++o) {
        double av = s.A_ext(j + o - 2), bv = s.B_ext(j + o - 2);
        a1 += w1[o] * av;
        a2 += w2[o] * av;
        b1 += w1[o] * bv;
        b2 += w2[o] * bv;
    }
    a1 /= s.dl;
    b1 /= s.dl;
    a2 /= s.dl * s.dl;
    b2 /= s.dl * s.dl;
    Vec x = Vec::Zero(s.n);
    x(0) = s.l(j);
    return radial_jet(s.n, x, s.A[j] - s.B[j], a1 - b1, a2 - b2, s.B[j], b1, b2);
}

void radial_rhs(const RadialState& s, std::vector<double>& dA, std::vector<double>& dB, Exec exec) {
    dA.assign(s.N, 0.0);
    dB.assign(s.N, 0.0);
    auto body = [&](int j) {
        Mat r = rdtf_rhs(radial_node_jet(s, j));
        dA[j] = r(0, 0);
        dB[j] = r(1, 1);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < s.N; ++j) body(j);
    } else {
        for (int j = 0; j < s.N; ++j) body(j);
    }
}

void radial_rdtf_step(RadialState& s, double dt, Exec exec) {
    std::vector<double> a1, b1, a2, b2;
    radial_rhs(s, a1, b1, exec);
    RadialState y = s;
    for (int j = 0; j < s.N; ++j) {
        y.A[j] += dt * a1[j];
        y.B[j] += dt * b1[j];
    }
    radial_rhs(y, a2, b2, exec);
    for (int j = 0; j < s.N; ++j) {
        s.A[j] += 0.5 * dt * (a1[j] + a2[j]);
        s.B[j] += 0.5 * dt * (b1[j] + b2[j]);
    }
    s.t += dt;
}

double radial_dt_fe(const RadialState& s) {
    double hmax = 0.0;
    for (int j = 0; j < s.N; ++j) hmax = std::max({hmax, std::abs(s.A[j]), std::abs(s.B[j])});
    double lmin = s.l(0);
    double geo = (s.n - 1.0) * (1.37 * s.dl / lmin + s.dl * s.dl / (lmin * lmin));
    double lam = (16.0 / 3.0 + 2.0 * geo) * (1.0 + 2.0 * hmax) / (s.dl * s.dl);
    return 2.0 / lam;
}

void rkl2_step(RadialState& s, double tau, int stages, Exec exec) {
    const int S = std::max(2, stages);
    auto bj = [](int j) { return j <= 2 ? 1.0 / 3.0 : (j * j + j - 2.0) / (2.0 * j * (j + 1.0)); };
    const double w1 = 4.0 / (S * S + S - 2.0);
    const int N = s.N;
    std::vector<double> LA0, LB0, LA, LB;
    radial_rhs(s, LA0, LB0, exec);
    RadialState y0 = s, ym2 = s, ym1 = s;
    double mt1 = bj(1) * w1;
    for (int j = 0; j < N; ++j) {
        ym1.A[j] = y0.A[j] + mt1 * tau * LA0[j];
        ym1.B[j] = y0.B[j] + mt1 * tau * LB0[j];
    }
    RadialState yj = s;
    for (int j = 2; j <= S; ++j) {
        double mu = (2.0 * j - 1.0) / j * bj(j) / bj(j - 1);
        double nu = -(j - 1.0) / j * bj(j) / bj(j - 2);
        double mt = mu * w1;
        double gt = -(1.0 - bj(j - 1)) * mt;
        radial_rhs(ym1, LA, LB, exec);
        for (int i = 0; i < N; ++i) {
            yj.A[i] = mu * ym1.A[i] + nu * ym2.A[i] + (1.0 - mu - nu) * y0.A[i] + mt * tau * LA[i] + gt * tau * LA0[i];
            yj.B[i] = mu * ym1.B[i] + nu * ym2.B[i] + (1.0 - mu - nu) * y0.B[i] + mt * tau * LB[i] + gt * tau * LB0[i];
        }
        std::swap(ym2, ym1);
        std::swap(ym1, yj);
    }
    s.A = ym1.A;
    s.B = ym1.B;
    s.t += tau;
}

std::vector<RadialState> radial_rdtf_solve(const RadialState& init, const RadialSolveOptions& opt) {
    std::vector<RadialState> out;
    RadialState s = init;
    const double h0 = s.sup_norm();
    std::vector<double> stops = opt.output_times;
    std::sort(stops.begin(), stops.end());
    for (double stop : stops) {
        double span = stop - s.t;
        if (span > 0.0) {
            double dtfe = opt.safety * radial_dt_fe(s);
            double smax = opt.max_stages;
            double cover = dtfe * (smax * smax + smax - 2.0) / 4.0;
            if (opt.max_substep > 0.0) cover = std::min(cover, opt.max_substep);
            int m = std::max(1, static_cast<int>(std::ceil(span / cover)));
            double tau = span / m;
            int S = 2;
            while ((S * S + S - 2.0) / 4.0 * dtfe < tau) ++S;
            for (int k = 0; k < m; ++k) {
                if (S <= 2 && tau <= dtfe)
                    radial_rdtf_step(s, tau, opt.exec);
                else
                    rkl2_step(s, tau, S, opt.exec);
                double sup = s.sup_norm();
                if (!std::isfinite(sup) || (h0 > 0.0 && sup > 2.0 * h0))
                    throw Error("radial flow blow-up: |h| doubled from its initial value at t=" +
                                std::to_string(s.t));
            }
        }
        s.t = stop;
        out.push_back(s);
    }
    return out;
}

std::vector<double> radial_scalar_curvature(const RadialState& s) {
    std::vector<double> R(s.N);
    for (int j = 0; j < s.N; ++j) R[j] = scalar_curvature(radial_node_jet(s, j));
    return R;
}

}  // namespace c0m
