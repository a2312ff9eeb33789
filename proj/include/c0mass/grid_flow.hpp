#pragma once

#include <memory>
#include <vector>

#include "c0mass/geometry.hpp"
#include "c0mass/parallel.hpp"

namespace c0m {

// h_ij on the box [-L, L]^n with N points per axis. Storage carries two
// layers of zero ghosts on every side; the outermost real nodes are held at 0.
class GridState {
public:
    GridState() = default;
    GridState(int n, int N, double L);

    int n = 3, N = 0, P = 0;
    double L = 0.0, dx = 0.0, t = 0.0;
    std::vector<std::vector<double>> c;  // component arrays, padded

    int components() const { return component_count(n); }
    std::size_t padded_size() const { return c.empty() ? 0 : c[0].size(); }
    // idx are lattice indices in [0, N-1]
    std::size_t flat(const std::array<int, kMaxDim>& idx) const;
    std::array<int, kMaxDim> unflat_interior(std::size_t k) const;  // k over (N-2)^n interior nodes
    std::size_t interior_count() const;
    Vec coord(const std::array<int, kMaxDim>& idx) const;
    Mat h_at(std::size_t p) const;
    void set(std::size_t p, const Mat& h);
    Jet jet_at(std::size_t p, int order) const;

    static GridState from_field(const MetricField& g, int N, double L, Exec exec = Exec::Parallel);
    std::shared_ptr<GridField> to_field() const;

    double sup_norm(Exec exec = Exec::Parallel) const;   // max |h| (Frobenius)
    double sup_grad(int order = 4, Exec exec = Exec::Parallel) const;
    bool bitwise_equal(const GridState& o) const;
};

void grid_rhs(const GridState& s, GridState& out, int order, Exec exec);
// explicit Heun (RK2)
void rdtf_step(GridState& s, double dt, int order = 4, Exec exec = Exec::Parallel);
// 80% of the explicit stability limit
double default_grid_dt(const GridState& s, int order = 4);

struct GridSolveOptions {
    double T = 0.1;
    double dt = 0.0;   // 0 selects default_grid_dt
    int order = 4;
    std::vector<double> output_times;  // snapshots kept at these times (T always included)
    std::vector<double> diag_times;    // gradient diagnostic sampled here
    Exec exec = Exec::Parallel;
    double eps_bar = 0.1;
    bool enforce_eps_bar = true;
};

struct GridTrajectory {
    double eps0 = 0.0;
    std::vector<GridState> snapshots;
    std::vector<double> diag_t, diag_sup_h, diag_grad_scaled;  // sup|grad h| sqrt(t) / eps0
    int steps = 0;
};

GridTrajectory rdtf_solve(const GridState& init, const GridSolveOptions& opt);

}  // namespace c0m
