#include "c0mass/rdtf_kernel.hpp"

namespace c0m {

RdtfTerms rdtf_terms(const Jet& J) {
    const int n = J.n;
    RdtfTerms T;
    const Mat I = Mat::Identity(n, n);
    const Mat G = (I + J.h).inverse();

    // P[i](m,p) = d_m h_ip
    std::array<Mat, kMaxDim> DG, PG, PTG, P;
    for (int i = 0; i < n; ++i) {
        P[i] = Mat(n, n);
        for (int m = 0; m < n; ++m)
            for (int p = 0; p < n; ++p) P[i](m, p) = J.d[m](i, p);
    }
    for (int k = 0; k < n; ++k) {
        DG[k] = J.d[k] * G;
        PG[k] = P[k] * G;
        PTG[k] = P[k].transpose() * G;
    }
    for (auto& q : T.quad) q = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            T.quad[0](i, j) = (DG[i] * DG[j]).trace();
            T.quad[1](i, j) = (PG[i] * PG[j]).trace();
            T.quad[2](i, j) = (PG[i] * PTG[j]).trace();
            T.quad[3](i, j) = (PG[i] * DG[j]).trace();
            T.quad[4](i, j) = (DG[i] * PTG[j]).trace();
        }

    // v^q = d_p G^{pq} = -(G d_p h G)_{pq}
    Vec v = Vec::Zero(n);
    for (int p = 0; p < n; ++p) {
        Mat dG = -G * J.d[p] * G;
        for (int q = 0; q < n; ++q) v(q) += dG(p, q);
    }
    T.drift = Mat::Zero(n, n);
    for (int q = 0; q < n; ++q) T.drift -= v(q) * J.d[q];

    T.q0 = 0.5 * (T.quad[0] + 2.0 * T.quad[1] - 2.0 * T.quad[2] - 2.0 * T.quad[3] - 2.0 * T.quad[4]) + T.drift;

    // d_p((G - I)^{pq} d_q h) expanded by the Leibniz rule
    const Mat GI = G - I;
    T.div_q1 = Mat::Zero(n, n);
    for (int q = 0; q < n; ++q) T.div_q1 += v(q) * J.d[q];
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if (GI(p, q) != 0.0) T.div_q1 += GI(p, q) * J.dd[p][q];

    T.laplacian = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) T.laplacian += J.dd[k][k];
    T.rhs = T.laplacian + T.q0 + T.div_q1;
    return T;
}

Mat rdtf_rhs(const Jet& J) { return rdtf_terms(J).rhs; }

}  // namespace c0m
