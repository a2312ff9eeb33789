#pragma once

#include <vector>

#include "c0mass/geometry.hpp"
#include "c0mass/parallel.hpp"

namespace c0m {

enum class InnerBoundary { Regular, Frozen };

// Spherically symmetric h = A n(x)n(x)^T + B (delta - n n^T), i.e. a = 1 + A,
// b = 1 + B, on cells l_j = l0 + (j + 1/2) dl. Two ghost cells on each side:
// even reflection through the origin (Regular) or values frozen at the
// initial data (Frozen). The outer side is always frozen.
struct RadialState {
    int n = 3;
    int N = 0;
    double l0 = 0.0, dl = 0.0, t = 0.0;
    InnerBoundary inner = InnerBoundary::Regular;
    std::vector<double> A, B;
    double gA_in[2]{}, gB_in[2]{}, gA_out[2]{}, gB_out[2]{};

    double l(int j) const { return l0 + (j + 0.5) * dl; }
    double l_end() const { return l0 + N * dl; }
    // value with ghosts, j in [-2, N+1]
    double A_ext(int j) const;
    double B_ext(int j) const;
    double A_at(double l) const;
    double B_at(double l) const;
    double sup_norm() const;

    FieldPtr field(const std::string& name = "radial-state") const;

    static RadialState from_profile(int n, int N, double l0, double l1, InnerBoundary inner,
                                    const ScalarFn& A, const ScalarFn& B);
    static RadialState from_field(const RadialProfileField& g, int N, double l0, double l1,
                                  InnerBoundary inner);
};

Jet radial_node_jet(const RadialState& s, int j);
// dA/dt, dB/dt at every cell from the full pointwise kernel at x = l e_1
void radial_rhs(const RadialState& s, std::vector<double>& dA, std::vector<double>& dB, Exec exec);
// explicit Heun step
void radial_rdtf_step(RadialState& s, double dt, Exec exec = Exec::Parallel);
// forward-Euler stability estimate
double radial_dt_fe(const RadialState& s);

struct RadialSolveOptions {
    std::vector<double> output_times;
    double safety = 0.5;
    int max_stages = 400;
    double max_substep = 0.0;   // > 0 caps each super-step
    Exec exec = Exec::Parallel;
};

// RKL2 super-time-stepping between the requested output times
std::vector<RadialState> radial_rdtf_solve(const RadialState& init, const RadialSolveOptions& opt);

// one RKL2 super-step with s stages of length tau
void rkl2_step(RadialState& s, double tau, int stages, Exec exec);

// R(g) at every cell using the node derivatives
std::vector<double> radial_scalar_curvature(const RadialState& s);

}  // namespace c0m
