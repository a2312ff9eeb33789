#include "c0mass/grid_flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "c0mass/rdtf_kernel.hpp"

namespace c0m {

GridState::GridState(int n_, int N_, double L_) : n(n_), N(N_), P(N_ + 4), L(L_) {
    if (n < 2 || n > kMaxDim) throw Error("unsupported dimension");
    if (N < 8) throw Error("grid too small");
    dx = 2.0 * L / (N - 1);
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(P);
    c.assign(component_count(n), std::vector<double>(total, 0.0));
}

std::size_t GridState::flat(const std::array<int, kMaxDim>& idx) const {
    std::size_t f = 0;
    for (int a = 0; a < n; ++a) f = f * P + (idx[a] + 2);
    return f;
}

std::size_t GridState::interior_count() const {
    std::size_t k = 1;
    for (int a = 0; a < n; ++a) k *= static_cast<std::size_t>(N - 2);
    return k;
}

std::array<int, kMaxDim> GridState::unflat_interior(std::size_t k) const {
    std::array<int, kMaxDim> idx{};
    for (int a = n - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(k % (N - 2)) + 1;
        k /= (N - 2);
    }
    return idx;
}

Vec GridState::coord(const std::array<int, kMaxDim>& idx) const {
    Vec x(n);
    for (int a = 0; a < n; ++a) x(a) = -L + idx[a] * dx;
    return x;
}

Mat GridState::h_at(std::size_t p) const {
    Mat m(n, n);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++k) m(i, j) = m(j, i) = c[k][p];
    return m;
}

void GridState::set(std::size_t p, const Mat& h) {
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++k) c[k][p] = h(i, j);
}

namespace {

constexpr double kD1o4[5] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
constexpr double kD2o4[5] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
constexpr double kD1o2[5] = {0.0, -0.5, 0.0, 0.5, 0.0};
constexpr double kD2o2[5] = {0.0, 1.0, -2.0, 1.0, 0.0};

}  // namespace

Jet GridState::jet_at(std::size_t p, int order) const {
    Jet J(n, 2);
    const double* w1 = order == 2 ? kD1o2 : kD1o4;
    const double* w2 = order == 2 ? kD2o2 : kD2o4;
    std::array<std::ptrdiff_t, kMaxDim> stride{};
    std::ptrdiff_t s = 1;
    for (int a = n - 1; a >= 0; --a) {
        stride[a] = s;
        s *= P;
    }
    const int nc = components();
    double d1[kMaxDim][15], d2[kMaxDim][kMaxDim][15];
    for (int k = 0; k < nc; ++k) {
        const double* v = c[k].data();
        for (int a = 0; a < n; ++a) {
            double x1 = 0.0, x2 = 0.0;
            for (int o = 0; o < 5; ++o) {
                double val = v[p + (o - 2) * stride[a]];
                x1 += w1[o] * val;
                x2 += w2[o] * val;
            }
            d1[a][k] = x1;
            d2[a][a][k] = x2;
        }
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                double acc = 0.0;
                for (int o = 0; o < 5; ++o) {
                    if (w1[o] == 0.0) continue;
                    double inner = 0.0;
                    std::size_t base = p + (o - 2) * stride[a];
                    for (int q = 0; q < 5; ++q)
                        if (w1[q] != 0.0) inner += w1[q] * v[base + (q - 2) * stride[b]];
                    acc += w1[o] * inner;
                }
                d2[a][b][k] = d2[b][a][k] = acc;
            }
    }
    const double i1 = 1.0 / dx, i2 = 1.0 / (dx * dx);
    int k = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++k) {
            J.h(i, j) = J.h(j, i) = c[k][p];
            for (int a = 0; a < n; ++a) {
                J.d[a](i, j) = J.d[a](j, i) = d1[a][k] * i1;
                for (int b = 0; b < n; ++b) J.dd[a][b](i, j) = J.dd[a][b](j, i) = d2[a][b][k] * i2;
            }
        }
    return J;
}

GridState GridState::from_field(const MetricField& g, int N, double L, Exec exec) {
    GridState s(g.dim(), N, L);
    const std::size_t M = s.interior_count();
    auto body = [&](std::size_t k) {
        auto idx = s.unflat_interior(k);
        s.set(s.flat(idx), g.h(s.coord(idx)));
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::size_t k = 0; k < M; ++k) body(k);
    } else {
        for (std::size_t k = 0; k < M; ++k) body(k);
    }
    return s;
}

std::shared_ptr<GridField> GridState::to_field() const {
    std::size_t total = 1;
    for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(N);
    std::vector<std::vector<double>> comps(components(), std::vector<double>(total));
    std::array<int, kMaxDim> idx{};
    for (std::size_t f = 0; f < total; ++f) {
        std::size_t r = f;
        for (int a = n - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(r % N);
            r /= N;
        }
        std::size_t p = flat(idx);
        for (int k = 0; k < components(); ++k) comps[k][f] = c[k][p];
    }
    return std::make_shared<GridField>(n, N, -L, dx, std::move(comps), "grid-state");
}

double GridState::sup_norm(Exec exec) const {
    const std::size_t T = padded_size();
    std::vector<double> v(T);
    auto body = [&](std::size_t p) {
        double s = 0.0;
        int k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j, ++k) s += (i == j ? 1.0 : 2.0) * c[k][p] * c[k][p];
        v[p] = std::sqrt(s);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::size_t p = 0; p < T; ++p) body(p);
    } else {
        for (std::size_t p = 0; p < T; ++p) body(p);
    }
    return deterministic_max(v, exec);
}

double GridState::sup_grad(int order, Exec exec) const {
    const std::size_t M = interior_count();
    std::vector<double> v(M);
    auto body = [&](std::size_t k) {
        Jet J = jet_at(flat(unflat_interior(k)), order);
        double s = 0.0;
        for (int a = 0; a < n; ++a) s += J.d[a].squaredNorm();
        v[k] = std::sqrt(s);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::size_t k = 0; k < M; ++k) body(k);
    } else {
        for (std::size_t k = 0; k < M; ++k) body(k);
    }
    return deterministic_max(v, exec);
}

bool GridState::bitwise_equal(const GridState& o) const {
    if (n != o.n || N != o.N || c.size() != o.c.size()) return false;
    for (std::size_t k = 0; k < c.size(); ++k)
        if (std::memcmp(c[k].data(), o.c[k].data(), c[k].size() * sizeof(double)) != 0) return false;
    return true;
}

void grid_rhs(const GridState& s, GridState& out, int order, Exec exec) {
    if (out.N != s.N || out.n != s.n) out = GridState(s.n, s.N, s.L);
    const std::size_t M = s.interior_count();
    auto body = [&](std::size_t k) {
        std::size_t p = s.flat(s.unflat_interior(k));
        out.set(p, rdtf_rhs(s.jet_at(p, order)));
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::size_t k = 0; k < M; ++k) body(k);
    } else {
        for (std::size_t k = 0; k < M; ++k) body(k);
    }
}

namespace {

// y = a + s * b on every stored value (ghosts and boundary stay zero because b is zero there)
void axpy(GridState& y, const GridState& a, double s, const GridState& b, Exec exec) {
    for (std::size_t k = 0; k < y.c.size(); ++k) {
        double* yy = y.c[k].data();
        const double* aa = a.c[k].data();
        const double* bb = b.c[k].data();
        const std::size_t T = y.c[k].size();
        if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
            for (std::size_t p = 0; p < T; ++p) yy[p] = aa[p] + s * bb[p];
        } else {
            for (std::size_t p = 0; p < T; ++p) yy[p] = aa[p] + s * bb[p];
        }
    }
}

}  // namespace

void rdtf_step(GridState& s, double dt, int order, Exec exec) {
    GridState k1(s.n, s.N, s.L), k2(s.n, s.N, s.L), y(s.n, s.N, s.L);
    grid_rhs(s, k1, order, exec);
    axpy(y, s, dt, k1, exec);
    grid_rhs(y, k2, order, exec);
    for (std::size_t k = 0; k < s.c.size(); ++k) {
        double* h = s.c[k].data();
        const double* a = k1.c[k].data();
        const double* b = k2.c[k].data();
        const std::size_t T = s.c[k].size();
        if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
            for (std::size_t p = 0; p < T; ++p) h[p] = h[p] + 0.5 * dt * (a[p] + b[p]);
        } else {
            for (std::size_t p = 0; p < T; ++p) h[p] = h[p] + 0.5 * dt * (a[p] + b[p]);
        }
    }
    s.t += dt;
}

double default_grid_dt(const GridState& s, int order) {
    // Heun is stable on [-2, 0]; the Laplacian stencil reaches n * 16/3 (order 4)
    // or n * 4 (order 2) in units of dx^-2, and g^{pq} scales it by up to 1 + 2|h|
    const double lam = s.n * (order == 2 ? 4.0 : 16.0 / 3.0) * (1.0 + 2.0 * s.sup_norm());
    return 0.8 * 2.0 / lam * s.dx * s.dx;
}

GridTrajectory rdtf_solve(const GridState& init, const GridSolveOptions& opt) {
    GridTrajectory tr;
    GridState s = init;
    tr.eps0 = s.sup_norm(opt.exec);
    if (opt.enforce_eps_bar && tr.eps0 >= opt.eps_bar)
        throw Error("initial data too far from flat: |g0 - delta| exceeds eps_bar");
    const double dt = opt.dt > 0.0 ? opt.dt : default_grid_dt(s, opt.order);
    std::vector<double> stops = opt.output_times;
    stops.insert(stops.end(), opt.diag_times.begin(), opt.diag_times.end());
    stops.push_back(opt.T);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    auto is_in = [](const std::vector<double>& v, double t) {
        return std::find(v.begin(), v.end(), t) != v.end();
    };
    const double t0 = s.t;
    for (double stop : stops) {
        if (stop < t0 - 1e-15) continue;
        while (s.t < stop - 1e-12 * std::max(1.0, stop)) {
            double h = std::min(dt, stop - s.t);
            rdtf_step(s, h, opt.order, opt.exec);
            ++tr.steps;
            double sup = s.sup_norm(opt.exec);
            if (!std::isfinite(sup) || (tr.eps0 > 0.0 && sup > 2.0 * tr.eps0))
                throw Error("blow-up detected: |h| doubled from its initial value at t=" + std::to_string(s.t));
        }
        s.t = stop;
        if (is_in(opt.diag_times, stop)) {
            tr.diag_t.push_back(stop);
            tr.diag_sup_h.push_back(s.sup_norm(opt.exec));
            double g = s.sup_grad(opt.order, opt.exec);
            tr.diag_grad_scaled.push_back(tr.eps0 > 0.0 ? g * std::sqrt(stop) / tr.eps0 : 0.0);
        }
        if (is_in(opt.output_times, stop) || stop == opt.T) tr.snapshots.push_back(s);
    }
    return tr;
}

}  // namespace c0m
