#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradkit {

struct Dataset;  // defined in problems.hpp

struct IdxError : std::runtime_error {
  enum class Kind { bad_magic, truncated, dim_overflow };
  Kind kind;
  IdxError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// IDX, bit-exact: 4-byte big-endian magic (0x00000803 for 3-D image tensors,
// 0x00000801 for label vectors), one 4-byte big-endian size per dimension,
// then row-major unsigned bytes. Image pixels are scaled to [0, 1]; labels
// land in targets as-is. Each malformation raises a distinct IdxError kind.
Dataset load_idx(const std::string& path);
Dataset parse_idx(const std::vector<std::uint8_t>& bytes);

// Inverse of parse_idx: a loaded file re-serializes to identical bytes.
std::vector<std::uint8_t> idx_bytes(const Dataset& d);
void save_idx(const Dataset& d, const std::string& path);

// Pairs an image dataset with a label dataset of equal count.
Dataset with_labels(Dataset images, const Dataset& labels);

}  // namespace gradkit
