#include "gradkit/vec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gradkit/parallel.hpp"

namespace gradkit {

void check_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

Vec hadamard(const Vec& a, const Vec& b) {
  check_same_dim(a.size(), b.size(), "hadamard");
  Vec out(a.size());
  const std::ptrdiff_t n = std::ssize(a);
  if (n >= omp_grain) {
#pragma omp parallel for
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] =
          a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    }
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  }
  return out;
}

Vec elementwise_max(const Vec& a, const Vec& b) {
  check_same_dim(a.size(), b.size(), "elementwise_max");
  Vec out(a.size());
  const std::ptrdiff_t n = std::ssize(a);
  if (n >= omp_grain) {
#pragma omp parallel for
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double x = a[static_cast<std::size_t>(i)];
      const double y = b[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = x > y ? x : y;
    }
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] > b[i] ? a[i] : b[i];
  }
  return out;
}

double l2_norm(std::span<const double> a) { return std::sqrt(det_sumsq(a)); }

std::ptrdiff_t first_nonfinite(std::span<const double> a) {
  for (std::ptrdiff_t i = 0; i < std::ssize(a); ++i) {
    if (!std::isfinite(a[static_cast<std::size_t>(i)])) return i;
  }
  return -1;
}

}  // namespace gradkit
