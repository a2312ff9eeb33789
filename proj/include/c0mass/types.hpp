#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace c0m {

// dimensions above 5 are not supported; small fixed capacity keeps the
// pointwise kernels free of heap traffic
constexpr int kMaxDim = 5;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

// h = g - delta together with its first and second partial derivatives.
// d[k](i,j) = d_k h_ij, dd[k][l](i,j) = d_k d_l h_ij
struct Jet {
    int n = 0;
    int order = 0;
    Mat h;
    std::array<Mat, kMaxDim> d;
    std::array<std::array<Mat, kMaxDim>, kMaxDim> dd;

    explicit Jet(int dim = 3, int ord = 2) : n(dim), order(ord) {
        h = Mat::Zero(n, n);
        for (int k = 0; k < n; ++k) {
            d[k] = Mat::Zero(n, n);
            for (int l = 0; l < n; ++l) dd[k][l] = Mat::Zero(n, n);
        }
    }
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Vec unit_vector(int n, int k) {
    Vec e = Vec::Zero(n);
    e(k) = 1.0;
    return e;
}

}  // namespace c0m
