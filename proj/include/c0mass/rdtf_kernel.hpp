#pragma once

#include "c0mass/types.hpp"

namespace c0m {

// Right-hand side of dh/dt = Lap h + Q0[h] + div Q1[h] at one point, written
// term by term from the Euclidean-background form of the flow.
struct RdtfTerms {
    Mat laplacian;
    Mat quad[5];     // the five G G dh dh contractions, before the 1/2 and signs
    Mat drift;       // -d_p(G^{pq}) d_q h
    Mat q0;
    Mat div_q1;
    Mat rhs;
};

RdtfTerms rdtf_terms(const Jet& J);
Mat rdtf_rhs(const Jet& J);

}  // namespace c0m
