#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "c0mass/geometry.hpp"

namespace c0m {

namespace {

// side: 0 central, +1 forward, -1 backward; same layout as fd_jet
struct Stencil1D {
    std::vector<int> off1, off2;
    std::vector<double> w1, w2;
};

Stencil1D stencil_1d(int order, int side) {
    Stencil1D s;
    int hw = order / 2;
    auto fill = [](int lo, int hi) {
        std::vector<int> v;
        for (int i = lo; i <= hi; ++i) v.push_back(i);
        return v;
    };
    if (side == 0) {
        s.off1 = fill(-hw, hw);
        s.off2 = s.off1;
    } else if (side > 0) {
        s.off1 = fill(0, order);
        s.off2 = fill(0, order + 1);
    } else {
        s.off1 = fill(-order, 0);
        s.off2 = fill(-order - 1, 0);
    }
    std::vector<double> o1(s.off1.begin(), s.off1.end()), o2(s.off2.begin(), s.off2.end());
    s.w1 = fd_weights(1, o1);
    s.w2 = fd_weights(2, o2);
    return s;
}

}  // namespace

int component_count(int n) { return n * (n + 1) / 2; }

int component_index(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
}

Mat RadialProfileField::h(const Vec& x) const {
    const double l = x.norm();
    if (l == 0.0) return B_(0.0) * Mat::Identity(n_, n_);
    Vec nu = x / l;
    double a = A_(l), b = B_(l);
    Mat P = nu * nu.transpose();
    return a * P + b * (Mat::Identity(n_, n_) - P);
}

Jet RadialProfileField::jet(const Vec& x, const DerivativeStencil& st, int max_order) const {
    (void)max_order;
    const double l = x.norm();
    if (l == 0.0) throw Error("radial-profile jet requested at the origin");
    const double s = st.step_at(x);
    const int hw = st.order / 2;
    int side = 0;
    if (l - hw * s <= 0.0 || !dom_.contains_radius(l - hw * s) || !dom_.contains_radius(l + hw * s)) {
        if (st.fallback == DerivativeStencil::Fallback::Error)
            throw Error("insufficient stencil room near domain boundary");
        bool left_ok = l - hw * s > 0.0 && dom_.contains_radius(l - hw * s);
        side = left_ok ? -1 : 1;
    }
    Stencil1D S = stencil_1d(st.order, side);
    double a0 = A_(l), b0 = B_(l);
    double da = 0, db = 0, dda = 0, ddb = 0;
    for (size_t i = 0; i < S.off1.size(); ++i) {
        if (S.w1[i] == 0.0) continue;
        double p = l + S.off1[i] * s;
        da += S.w1[i] * (S.off1[i] == 0 ? a0 : A_(p));
        db += S.w1[i] * (S.off1[i] == 0 ? b0 : B_(p));
    }
    for (size_t i = 0; i < S.off2.size(); ++i) {
        if (S.w2[i] == 0.0) continue;
        double p = l + S.off2[i] * s;
        dda += S.w2[i] * (S.off2[i] == 0 ? a0 : A_(p));
        ddb += S.w2[i] * (S.off2[i] == 0 ? b0 : B_(p));
    }
    da /= s;
    db /= s;
    dda /= s * s;
    ddb /= s * s;
    return radial_jet(n_, x, a0 - b0, da - db, dda - ddb, b0, db, ddb);
}

GridField::GridField(int n, int points, double lo, double spacing,
                     std::vector<std::vector<double>> comps, std::string name)
    : MetricField(n, Domain::full(), std::move(name)),
      N_(points),
      lo_(lo),
      dx_(spacing),
      comps_(std::move(comps)) {
    if (static_cast<int>(comps_.size()) != component_count(n))
        throw Error("grid field: wrong component count");
    size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<size_t>(N_);
    for (auto& c : comps_)
        if (c.size() != total) throw Error("grid field: wrong sample count");
}

double GridField::sample(int comp, const std::vector<int>& idx) const {
    size_t flat = 0;
    for (int a = 0; a < n_; ++a) flat = flat * N_ + idx[a];
    return comps_[comp][flat];
}

Mat GridField::h(const Vec& x) const {
    Mat out = Mat::Zero(n_, n_);
    std::array<int, kMaxDim> base{};
    std::array<std::array<double, 4>, kMaxDim> w{};
    for (int a = 0; a < n_; ++a) {
        double u = (x(a) - lo_) / dx_;
        if (u < 0.0 || u > N_ - 1) return out;
        int i0 = static_cast<int>(std::floor(u)) - 1;
        i0 = std::max(0, std::min(i0, N_ - 4));
        base[a] = i0;
        for (int p = 0; p < 4; ++p) {
            double v = 1.0;
            for (int q = 0; q < 4; ++q)
                if (q != p) v *= (u - (i0 + q)) / double(p - q);
            w[a][p] = v;
        }
    }
    const int nc = component_count(n_);
    std::vector<double> acc(nc, 0.0);
    std::vector<int> idx(n_);
    int total = 1;
    for (int a = 0; a < n_; ++a) total *= 4;
    for (int c = 0; c < total; ++c) {
        int r = c;
        double wt = 1.0;
        for (int a = n_ - 1; a >= 0; --a) {
            int p = r % 4;
            r /= 4;
            idx[a] = base[a] + p;
            wt *= w[a][p];
        }
        size_t flat = 0;
        for (int a = 0; a < n_; ++a) flat = flat * N_ + idx[a];
        for (int k = 0; k < nc; ++k) acc[k] += wt * comps_[k][flat];
    }
    for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) out(i, j) = out(j, i) = acc[component_index(n_, i, j)];
    return out;
}

Jet GridField::node_jet(const std::vector<int>& idx, int order,
                        DerivativeStencil::Fallback fb) const {
    Jet J(n_, 2);
    const int hw = order / 2;
    auto at = [&](const std::vector<int>& id) {
        Mat m(n_, n_);
        size_t flat = 0;
        for (int a = 0; a < n_; ++a) flat = flat * N_ + id[a];
        for (int i = 0; i < n_; ++i)
            for (int j = i; j < n_; ++j) m(i, j) = m(j, i) = comps_[component_index(n_, i, j)][flat];
        return m;
    };
    std::vector<Stencil1D> S(n_);
    for (int a = 0; a < n_; ++a) {
        int side = 0;
        if (idx[a] - hw < 0 || idx[a] + hw > N_ - 1) {
            if (fb == DerivativeStencil::Fallback::Error)
                throw Error("insufficient stencil room near grid boundary");
            side = idx[a] + order + 1 <= N_ - 1 ? 1 : -1;
        }
        S[a] = stencil_1d(order, side);
    }
    J.h = at(idx);
    const double s2 = dx_ * dx_;
    for (int a = 0; a < n_; ++a) {
        Mat d1 = Mat::Zero(n_, n_), d2 = Mat::Zero(n_, n_);
        std::vector<int> id = idx;
        for (size_t i = 0; i < S[a].off1.size(); ++i) {
            if (S[a].w1[i] == 0.0) continue;
            id[a] = idx[a] + S[a].off1[i];
            d1 += S[a].w1[i] * at(id);
        }
        for (size_t i = 0; i < S[a].off2.size(); ++i) {
            if (S[a].w2[i] == 0.0) continue;
            id[a] = idx[a] + S[a].off2[i];
            d2 += S[a].w2[i] * at(id);
        }
        J.d[a] = d1 / dx_;
        J.dd[a][a] = d2 / s2;
    }
    for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b) {
            Mat acc = Mat::Zero(n_, n_);
            std::vector<int> id = idx;
            for (size_t i = 0; i < S[a].off1.size(); ++i) {
                if (S[a].w1[i] == 0.0) continue;
                id[a] = idx[a] + S[a].off1[i];
                for (size_t j = 0; j < S[b].off1.size(); ++j) {
                    if (S[b].w1[j] == 0.0) continue;
                    id[b] = idx[b] + S[b].off1[j];
                    acc += (S[a].w1[i] * S[b].w1[j]) * at(id);
                }
            }
            J.dd[a][b] = acc / s2;
            J.dd[b][a] = J.dd[a][b];
        }
    return J;
}

Jet GridField::jet(const Vec& x, const DerivativeStencil& st, int max_order) const {
    std::vector<int> idx(n_);
    bool on_node = true;
    for (int a = 0; a < n_; ++a) {
        double u = (x(a) - lo_) / dx_;
        double r = std::round(u);
        if (std::abs(u - r) > 1e-9 || r < 0 || r > N_ - 1) on_node = false;
        idx[a] = static_cast<int>(r);
    }
    if (on_node) return node_jet(idx, st.order, st.fallback);
    return fd_jet(n_, [this](const Vec& p) { return this->h(p); }, x, st, dom_, max_order);
}

void GridField::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open grid file for writing: " + path);
    const char magic[4] = {'C', '0', 'M', 'G'};
    f.write(magic, 4);
    int32_t n = n_;
    f.write(reinterpret_cast<const char*>(&n), sizeof n);
    for (int a = 0; a < n_; ++a) {
        int32_t e = N_;
        f.write(reinterpret_cast<const char*>(&e), sizeof e);
    }
    for (int a = 0; a < n_; ++a) f.write(reinterpret_cast<const char*>(&lo_), sizeof lo_);
    for (int a = 0; a < n_; ++a) f.write(reinterpret_cast<const char*>(&dx_), sizeof dx_);
    int32_t nc = component_count(n_);
    f.write(reinterpret_cast<const char*>(&nc), sizeof nc);
    const size_t total = comps_[0].size();
    for (size_t p = 0; p < total; ++p)
        for (int c = 0; c < nc; ++c) f.write(reinterpret_cast<const char*>(&comps_[c][p]), 8);
}

std::shared_ptr<GridField> GridField::load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open grid file: " + path);
    char magic[4];
    f.read(magic, 4);
    if (std::memcmp(magic, "C0MG", 4) != 0) throw Error("not a grid file: " + path);
    int32_t n;
    f.read(reinterpret_cast<char*>(&n), sizeof n);
    if (n < 2 || n > kMaxDim) throw Error("grid file: unsupported dimension");
    std::vector<int32_t> ext(n);
    std::vector<double> lo(n), sp(n);
    for (auto& e : ext) f.read(reinterpret_cast<char*>(&e), sizeof e);
    for (auto& v : lo) f.read(reinterpret_cast<char*>(&v), sizeof v);
    for (auto& v : sp) f.read(reinterpret_cast<char*>(&v), sizeof v);
    for (int a = 1; a < n; ++a)
        if (ext[a] != ext[0] || lo[a] != lo[0] || sp[a] != sp[0])
            throw Error("grid file: only cubic lattices are supported");
    int32_t nc;
    f.read(reinterpret_cast<char*>(&nc), sizeof nc);
    if (nc != component_count(n)) throw Error("grid file: wrong component count");
    size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<size_t>(ext[a]);
    std::vector<std::vector<double>> comps(nc, std::vector<double>(total));
    for (size_t p = 0; p < total; ++p)
        for (int c = 0; c < nc; ++c) f.read(reinterpret_cast<char*>(&comps[c][p]), 8);
    if (!f) throw Error("grid file truncated: " + path);
    return std::make_shared<GridField>(n, ext[0], lo[0], sp[0], std::move(comps), "grid{" + path + "}");
}

FieldPtr make_flat(int n) {
    return std::make_shared<ClosedFormField>(n, Domain::full(), "flat",
                                             [n](const Vec&) { return Mat::Zero(n, n).eval(); });
}

FieldPtr make_schwarzschild_leading(int n, double m) {
    return std::make_shared<ClosedFormField>(
        n, Domain::full(), "schwarzschild-lo{" + std::to_string(m) + "}", [n, m](const Vec& x) {
            double v = 2.0 * m * std::pow(x.norm(), 2.0 - n);
            return (v * Mat::Identity(n, n)).eval();
        });
}

FieldPtr make_schwarzschild_isotropic(int n, double m) {
    return std::make_shared<ClosedFormField>(
        n, Domain::full(), "schwarzschild{" + std::to_string(m) + "}", [n, m](const Vec& x) {
            double psi = 1.0 + m / (2.0 * std::pow(x.norm(), n - 2.0));
            double v = std::pow(psi, 4.0 / (n - 2.0)) - 1.0;
            return (v * Mat::Identity(n, n)).eval();
        });
}

FieldPtr make_power_decay(int n, double c, double tau) {
    return std::make_shared<ClosedFormField>(
        n, Domain::full(), "powerlaw{" + std::to_string(c) + "," + std::to_string(tau) + "}",
        [n, c, tau](const Vec& x) {
            return (c * std::pow(x.norm(), -tau) * Mat::Identity(n, n)).eval();
        });
}

FieldPtr make_conformal(int n, std::function<double(const Vec&)> f, std::string name) {
    return std::make_shared<ClosedFormField>(n, Domain::full(), std::move(name),
                                             [n, f](const Vec& x) {
                                                 double v = std::expm1(2.0 * f(x));
                                                 return (v * Mat::Identity(n, n)).eval();
                                             });
}

FieldPtr make_radial(int n, ScalarFn A, ScalarFn B, std::string name, Domain dom) {
    return std::make_shared<RadialProfileField>(n, dom, std::move(name), std::move(A), std::move(B));
}

FieldPtr make_constant(int n, const Mat& h) {
    return std::make_shared<ClosedFormField>(n, Domain::full(), "constant",
                                             [h](const Vec&) { return h; });
}

FieldPtr make_rotated(FieldPtr g, const Mat& O) {
    return std::make_shared<ClosedFormField>(
        g->dim(), g->domain(), "rotated(" + g->name() + ")",
        [g, O](const Vec& x) { return (O.transpose() * g->h(O * x) * O).eval(); });
}

FieldPtr make_translated(FieldPtr g, const Vec& v) {
    return std::make_shared<ClosedFormField>(g->dim(), Domain::full(),
                                             "translated(" + g->name() + ")",
                                             [g, v](const Vec& x) { return g->h(x + v); });
}

FieldPtr make_scaled_pullback(FieldPtr g, double lambda) {
    Domain d = g->domain();
    d.r_in /= lambda;
    d.r_out /= lambda;
    return std::make_shared<ClosedFormField>(g->dim(), d, "scaled(" + g->name() + ")",
                                             [g, lambda](const Vec& x) { return g->h(lambda * x); });
}

FieldPtr make_sum(FieldPtr a, FieldPtr b) {
    return std::make_shared<ClosedFormField>(a->dim(), a->domain(),
                                             a->name() + "+" + b->name(),
                                             [a, b](const Vec& x) { return (a->h(x) + b->h(x)).eval(); });
}

FieldPtr make_amplified(FieldPtr g, double s) {
    return std::make_shared<ClosedFormField>(g->dim(), g->domain(), g->name(),
                                             [g, s](const Vec& x) { return (s * g->h(x)).eval(); });
}

}  // namespace c0m
