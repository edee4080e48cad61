#include "gradkit/parallel.hpp"

#include <vector>

namespace gradkit {

namespace {

// Entering the OpenMP runtime costs microseconds even for a serialized
// region, so short inputs take a plain loop over the same chunk grid. Both
// paths combine per-chunk sums in chunk order and give identical bits.
template <class ChunkFn>
double chunked_reduce(std::ptrdiff_t n, ChunkFn chunk_sum) {
  if (n <= 0) return 0.0;
  const std::ptrdiff_t nchunks = (n + reduce_chunk - 1) / reduce_chunk;
  if (nchunks == 1) return chunk_sum(0, n);

  std::vector<double> partial(static_cast<std::size_t>(nchunks));
  if (n >= omp_grain) {
#pragma omp parallel for
    for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
      const std::ptrdiff_t lo = c * reduce_chunk;
      const std::ptrdiff_t hi = lo + reduce_chunk < n ? lo + reduce_chunk : n;
      partial[static_cast<std::size_t>(c)] = chunk_sum(lo, hi);
    }
  } else {
    for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
      const std::ptrdiff_t lo = c * reduce_chunk;
      const std::ptrdiff_t hi = lo + reduce_chunk < n ? lo + reduce_chunk : n;
      partial[static_cast<std::size_t>(c)] = chunk_sum(lo, hi);
    }
  }
  double acc = 0.0;
  for (std::ptrdiff_t c = 0; c < nchunks; ++c) acc += partial[static_cast<std::size_t>(c)];
  return acc;
}

}  // namespace

double det_sum(std::span<const double> x) {
  return chunked_reduce(std::ssize(x), [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) s += x[static_cast<std::size_t>(i)];
    return s;
  });
}

double det_sumsq(std::span<const double> x) {
  return chunked_reduce(std::ssize(x), [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    double s = 0.0;
    for (std::ptrdiff_t i = lo; i < hi; ++i) {
      const double v = x[static_cast<std::size_t>(i)];
      s += v * v;
    }
    return s;
  });
}

}  // namespace gradkit
