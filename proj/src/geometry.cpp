#include "c0mass/geometry.hpp"

#include <cmath>
#include <utility>

namespace c0m {

bool Domain::contains_radius(double l) const {
    switch (kind) {
        case DomainKind::Full: return true;
        case DomainKind::Annulus: return l >= r_in && l <= r_out;
        case DomainKind::BallComplement: return l >= r_in;
    }
    return true;
}

double DerivativeStencil::step_at(const Vec& x) const {
    if (spacing > 0.0) return spacing;
    return rel_spacing * std::max(1.0, x.norm());
}

std::vector<double> fd_weights(int m, const std::vector<double>& x) {
    const int N = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(N, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0, c4 = x[0];
    c[0][0] = 1.0;
    for (int i = 1; i < N; ++i) {
        int mn = std::min(i, m);
        double c2 = 1.0, c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(N);
    for (int i = 0; i < N; ++i) w[i] = c[i][m];
    return w;
}

namespace {

struct AxisStencil {
    std::vector<double> off1, w1, off2, w2;
};

std::vector<double> range_offsets(int lo, int hi) {
    std::vector<double> v;
    for (int i = lo; i <= hi; ++i) v.push_back(i);
    return v;
}

// side: 0 central, +1 forward, -1 backward
AxisStencil make_axis_stencil(int order, int side) {
    AxisStencil a;
    int hw = order / 2;
    if (side == 0) {
        a.off1 = range_offsets(-hw, hw);
        a.off2 = a.off1;
    } else if (side > 0) {
        a.off1 = range_offsets(0, order);
        a.off2 = range_offsets(0, order + 1);
    } else {
        a.off1 = range_offsets(-order, 0);
        a.off2 = range_offsets(-order - 1, 0);
    }
    a.w1 = fd_weights(1, a.off1);
    a.w2 = fd_weights(2, a.off2);
    return a;
}

int choose_side(const Domain& dom, const Vec& x, int k, double s, int order,
                DerivativeStencil::Fallback fb) {
    int hw = order / 2;
    auto inside = [&](double o) {
        Vec p = x;
        p(k) += o * s;
        return dom.contains(p);
    };
    if (inside(-hw) && inside(hw)) return 0;
    if (fb == DerivativeStencil::Fallback::Error)
        throw Error("insufficient stencil room near domain boundary");
    if (inside(order + 1)) return 1;
    if (inside(-order - 1)) return -1;
    throw Error("no admissible one-sided stencil near domain boundary");
}

}  // namespace

Jet fd_jet(int n, const HFunction& hfun, const Vec& x, const DerivativeStencil& st,
           const Domain& dom, int max_order) {
    Jet J(n, max_order);
    const double s = st.step_at(x);
    J.h = hfun(x);
    if (max_order < 1) return J;
    std::vector<AxisStencil> ax(n);
    for (int k = 0; k < n; ++k)
        ax[k] = make_axis_stencil(st.order, choose_side(dom, x, k, s, st.order, st.fallback));

    for (int k = 0; k < n; ++k) {
        const AxisStencil& a = ax[k];
        // sample the union of first and second derivative offsets once
        std::vector<std::pair<double, Mat>> cache;
        auto get = [&](double o) -> const Mat& {
            for (auto& c : cache)
                if (c.first == o) return c.second;
            if (o == 0.0) {
                cache.emplace_back(o, J.h);
            } else {
                Vec p = x;
                p(k) += o * s;
                cache.emplace_back(o, hfun(p));
            }
            return cache.back().second;
        };
        cache.reserve(a.off1.size() + a.off2.size());
        Mat d1 = Mat::Zero(n, n);
        for (size_t i = 0; i < a.off1.size(); ++i)
            if (a.w1[i] != 0.0) d1 += a.w1[i] * get(a.off1[i]);
        J.d[k] = d1 / s;
        if (max_order >= 2) {
            Mat d2 = Mat::Zero(n, n);
            for (size_t i = 0; i < a.off2.size(); ++i)
                if (a.w2[i] != 0.0) d2 += a.w2[i] * get(a.off2[i]);
            J.dd[k][k] = d2 / (s * s);
        }
    }
    if (max_order >= 2) {
        for (int k = 0; k < n; ++k)
            for (int l = k + 1; l < n; ++l) {
                Mat acc = Mat::Zero(n, n);
                const AxisStencil &a = ax[k], &b = ax[l];
                for (size_t i = 0; i < a.off1.size(); ++i) {
                    if (a.w1[i] == 0.0) continue;
                    for (size_t j = 0; j < b.off1.size(); ++j) {
                        if (b.w1[j] == 0.0) continue;
                        Vec p = x;
                        p(k) += a.off1[i] * s;
                        p(l) += b.off1[j] * s;
                        acc += (a.w1[i] * b.w1[j]) * hfun(p);
                    }
                }
                J.dd[k][l] = acc / (s * s);
                J.dd[l][k] = J.dd[k][l];
            }
    }
    return J;
}

Jet MetricField::jet(const Vec& x, const DerivativeStencil& st, int max_order) const {
    return fd_jet(n_, [this](const Vec& p) { return this->h(p); }, x, st, dom_, max_order);
}

Jet radial_jet(int n, const Vec& x, double al, double dal, double ddal, double be, double dbe,
               double ddbe) {
    Jet J(n, 2);
    const double l = x.norm();
    if (!(l > 0.0)) throw Error("radial jet requested at the origin");
    Vec nu = x / l;
    Mat P = Mat::Identity(n, n) - nu * nu.transpose();
    auto dlt = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    // dP_ik/dx_l
    auto dP = [&](int i, int k, int m) { return -(P(i, m) * nu(k) + nu(i) * P(k, m)) / l; };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) J.h(i, j) = be * dlt(i, j) + al * nu(i) * nu(j);

    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                J.d[k](i, j) = dbe * nu(k) * dlt(i, j) + dal * nu(k) * nu(i) * nu(j) +
                               al * (P(i, k) * nu(j) + nu(i) * P(j, k)) / l;

    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double v = ddbe * nu(m) * nu(k) * dlt(i, j) + dbe * P(k, m) / l * dlt(i, j);
                    v += ddal * nu(m) * nu(k) * nu(i) * nu(j);
                    v += dal * (P(k, m) * nu(i) * nu(j) + nu(k) * P(i, m) * nu(j) +
                                nu(k) * nu(i) * P(j, m)) / l;
                    v += dal * nu(m) * (P(i, k) * nu(j) + nu(i) * P(j, k)) / l;
                    double q = dP(i, k, m) * nu(j) + P(i, k) * P(j, m) / l + P(i, m) * P(j, k) / l +
                               nu(i) * dP(j, k, m);
                    v += al * (q / l - (P(i, k) * nu(j) + nu(i) * P(j, k)) * nu(m) / (l * l));
                    J.dd[k][m](i, j) = v;
                }
    return J;
}

Mat eval_metric(const MetricField& f, const Vec& x) {
    if (x.size() != f.dim()) throw Error("point dimension mismatch");
    if (!f.domain().contains(x)) throw Error("point outside field domain");
    Mat g = Mat::Identity(f.dim(), f.dim()) + f.h(x);
    g = 0.5 * (g + g.transpose());
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success) throw Error("non-positive-definite metric sample");
    return g;
}

void check_positive_definite(const MetricField& f, const std::vector<Vec>& pts) {
    for (const Vec& p : pts) (void)eval_metric(f, p);
}

std::array<Mat, kMaxDim> christoffels(const Jet& J) {
    const int n = J.n;
    Mat G = (Mat::Identity(n, n) + J.h).inverse();
    std::array<Mat, kMaxDim> lower, out;
    for (int l = 0; l < n; ++l) {
        lower[l] = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                lower[l](i, j) = 0.5 * (J.d[i](l, j) + J.d[j](l, i) - J.d[l](i, j));
    }
    for (int k = 0; k < n; ++k) {
        out[k] = Mat::Zero(n, n);
        for (int l = 0; l < n; ++l) out[k] += G(k, l) * lower[l];
    }
    return out;
}

std::array<Mat, kMaxDim> christoffels(const MetricField& f, const Vec& x,
                                      const DerivativeStencil& st) {
    return christoffels(f.jet(x, st, 1));
}

double scalar_curvature(const Jet& J) {
    const int n = J.n;
    Mat G = (Mat::Identity(n, n) + J.h).inverse();
    auto Gam = christoffels(J);
    std::array<Mat, kMaxDim> dG;
    for (int m = 0; m < n; ++m) dG[m] = -G * J.d[m] * G;
    // dGam[m][k](i,j) = d_m Gamma^k_ij
    std::array<std::array<Mat, kMaxDim>, kMaxDim> dGam;
    for (int m = 0; m < n; ++m) {
        std::array<Mat, kMaxDim> low, dlow;
        for (int l = 0; l < n; ++l) {
            low[l] = Mat::Zero(n, n);
            dlow[l] = Mat::Zero(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    low[l](i, j) = 0.5 * (J.d[i](l, j) + J.d[j](l, i) - J.d[l](i, j));
                    dlow[l](i, j) =
                        0.5 * (J.dd[m][i](l, j) + J.dd[m][j](l, i) - J.dd[m][l](i, j));
                }
        }
        for (int k = 0; k < n; ++k) {
            dGam[m][k] = Mat::Zero(n, n);
            for (int l = 0; l < n; ++l) dGam[m][k] += dG[m](k, l) * low[l] + G(k, l) * dlow[l];
        }
    }
    double R = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            double t = 0.0;
            for (int m = 0; m < n; ++m) {
                t += dGam[m][m](k, l) - dGam[l][m](k, m);
                for (int q = 0; q < n; ++q)
                    t += Gam[m](m, q) * Gam[q](k, l) - Gam[m](l, q) * Gam[q](k, m);
            }
            R += G(k, l) * t;
        }
    return R;
}

ScalarSplit scalar_curvature_split(const Jet& J) {
    const int n = J.n;
    ScalarSplit out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.linear += J.dd[j][i](i, j) - J.dd[j][j](i, i);

    Mat G = (Mat::Identity(n, n) + J.h).inverse();
    auto Gam = christoffels(J);
    std::array<Mat, kMaxDim> dG;
    for (int m = 0; m < n; ++m) dG[m] = -G * J.d[m] * G;
    auto dlt = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    const auto& d = J.d;
    const auto& dd = J.dd;

    double q1 = 0.0, q2 = 0.0, q3 = 0.0;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int m = 0; m < n; ++m)
                for (int p = 0; p < n; ++p) {
                    double c = 0.5 * (G(k, l) * G(m, p) - dlt(k, l) * dlt(m, p));
                    double br = (dd[m][k](p, l) + dd[m][l](p, k) - dd[m][p](k, l)) -
                                (dd[l][k](p, m) + dd[l][m](p, k) - dd[l][p](k, m));
                    q1 += c * br;
                    q2 += 0.5 * G(k, l) *
                          (dG[m](m, p) * (d[k](l, p) + d[l](k, p) - d[p](k, l)) -
                           dG[l](m, p) * (d[k](m, p) + d[m](k, p) - d[p](k, m)));
                }
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            double t = 0.0;
            for (int q = 0; q < n; ++q)
                for (int m = 0; m < n; ++m)
                    t += Gam[q](k, l) * Gam[m](q, m) - Gam[q](m, k) * Gam[m](l, q);
            q3 += G(k, l) * t;
        }
    out.quadratic = q1 + q2 + q3;

    double hn = J.h.norm(), d1 = 0.0, d2 = 0.0;
    for (int k = 0; k < n; ++k) {
        d1 += d[k].squaredNorm();
        for (int l = 0; l < n; ++l) d2 += dd[k][l].squaredNorm();
    }
    double denom = hn * std::sqrt(d2) + d1;
    out.bound_ratio = denom > 0.0 ? std::abs(out.quadratic) / denom : 0.0;
    return out;
}

double scalar_curvature(const MetricField& f, const Vec& x, const DerivativeStencil& st) {
    return scalar_curvature(f.jet(x, st, 2));
}

ScalarSplit scalar_curvature_split(const MetricField& f, const Vec& x,
                                   const DerivativeStencil& st) {
    return scalar_curvature_split(f.jet(x, st, 2));
}

}  // namespace c0m
