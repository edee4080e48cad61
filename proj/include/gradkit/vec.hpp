#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gradkit {

// Parameters and gradients share one flat double-precision representation.
// Every update rule here is elementwise, so flattened storage loses nothing.
using Vec = std::vector<double>;

// Throws std::invalid_argument naming `what` when the dimensions differ.
void check_same_dim(std::size_t a, std::size_t b, const char* what);

Vec hadamard(const Vec& a, const Vec& b);
Vec elementwise_max(const Vec& a, const Vec& b);
double l2_norm(std::span<const double> a);

// Index of the first NaN/Inf entry, or -1 when every entry is finite.
std::ptrdiff_t first_nonfinite(std::span<const double> a);

}  // namespace gradkit
