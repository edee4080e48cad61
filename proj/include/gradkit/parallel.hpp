#pragma once

#include <cstddef>
#include <span>

namespace gradkit {

// Loops shorter than this stay on the calling thread; OpenMP kicks in above.
inline constexpr std::ptrdiff_t omp_grain = 4096;

// Reductions run on a fixed chunk grid: per-chunk partials are summed
// left-to-right within each chunk and combined in chunk order, so the result
// does not depend on the number of OpenMP threads.
inline constexpr std::ptrdiff_t reduce_chunk = 1024;

double det_sum(std::span<const double> x);
double det_sumsq(std::span<const double> x);

}  // namespace gradkit
