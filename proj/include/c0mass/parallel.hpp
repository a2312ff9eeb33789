#pragma once

#include <cstddef>
#include <vector>

namespace c0m {

enum class Exec { Serial, Parallel };

// Reads C0MASS_THREADS and caps the OpenMP team size. Safe to call repeatedly.
void configure_threads();
int thread_count();

// Fixed-shape pairwise tree. The chunk layout does not depend on the number
// of threads, so Serial and Parallel give bit-identical results.
double pairwise_sum(const double* x, std::size_t n);
double deterministic_sum(const std::vector<double>& x, Exec exec = Exec::Parallel);
double deterministic_max(const std::vector<double>& x, Exec exec = Exec::Parallel);
double deterministic_min(const std::vector<double>& x, Exec exec = Exec::Parallel);

}  // namespace c0m
