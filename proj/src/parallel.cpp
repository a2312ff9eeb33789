#include "c0mass/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include <omp.h>

namespace c0m {

namespace {
constexpr std::size_t kLeaf = 32;
constexpr std::size_t kChunk = 4096;
}

void configure_threads() {
    const char* s = std::getenv("C0MASS_THREADS");
    if (!s) return;
    int cap = std::atoi(s);
    if (cap < 1) return;
    omp_set_num_threads(std::min(cap, omp_get_num_procs()));
}

int thread_count() { return omp_get_max_threads(); }

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= kLeaf) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double deterministic_sum(const std::vector<double>& x, Exec exec) {
    const std::size_t n = x.size();
    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    if (nchunks <= 1) return pairwise_sum(x.data(), n);
    std::vector<double> partial(nchunks);
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (long c = 0; c < static_cast<long>(nchunks); ++c) {
            std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
            partial[c] = pairwise_sum(x.data() + lo, hi - lo);
        }
    } else {
        for (std::size_t c = 0; c < nchunks; ++c) {
            std::size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
            partial[c] = pairwise_sum(x.data() + lo, hi - lo);
        }
    }
    return pairwise_sum(partial.data(), nchunks);
}

double deterministic_max(const std::vector<double>& x, Exec exec) {
    double m = -std::numeric_limits<double>::infinity();
    if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(max : m) schedule(static)
        for (long i = 0; i < static_cast<long>(x.size()); ++i) m = std::max(m, x[i]);
    } else {
        for (double v : x) m = std::max(m, v);
    }
    return m;
}

double deterministic_min(const std::vector<double>& x, Exec exec) {
    double m = std::numeric_limits<double>::infinity();
    if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(min : m) schedule(static)
        for (long i = 0; i < static_cast<long>(x.size()); ++i) m = std::min(m, x[i]);
    } else {
        for (double v : x) m = std::min(m, v);
    }
    return m;
}

}  // namespace c0m
