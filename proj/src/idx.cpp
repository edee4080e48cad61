#include "gradkit/idx.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gradkit/problems.hpp"

namespace gradkit {

namespace {

constexpr std::uint32_t magic_images = 0x00000803;
constexpr std::uint32_t magic_labels = 0x00000801;
constexpr std::int64_t max_elements = std::int64_t{1} << 40;

std::uint32_t read_be32(const std::vector<std::uint8_t>& b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

Dataset parse_idx(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4) {
    throw IdxError(IdxError::Kind::truncated,
                   "idx: file too short for the 4-byte magic");
  }
  const std::uint32_t magic = read_be32(bytes, 0);
  int ndims = 0;
  if (magic == magic_images) {
    ndims = 3;
  } else if (magic == magic_labels) {
    ndims = 1;
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "0x%08x", magic);
    throw IdxError(IdxError::Kind::bad_magic,
                   std::string("idx: unsupported magic ") + buf);
  }

  const std::size_t header = 4 + 4 * static_cast<std::size_t>(ndims);
  if (bytes.size() < header) {
    throw IdxError(IdxError::Kind::truncated, "idx: truncated dimension header");
  }

  std::int64_t dims[3] = {1, 1, 1};
  std::int64_t total = 1;
  for (int d = 0; d < ndims; ++d) {
    dims[d] = static_cast<std::int64_t>(read_be32(bytes, 4 + 4 * static_cast<std::size_t>(d)));
    if (dims[d] <= 0 || total > max_elements / (dims[d] > 0 ? dims[d] : 1)) {
      throw IdxError(IdxError::Kind::dim_overflow,
                     "idx: dimension sizes overflow the supported range");
    }
    total *= dims[d];
  }

  if (bytes.size() != header + static_cast<std::size_t>(total)) {
    throw IdxError(IdxError::Kind::truncated,
                   "idx: payload size does not match the declared dimensions (" +
                       std::to_string(bytes.size() - header) + " bytes for " +
                       std::to_string(total) + " elements)");
  }

  Dataset d;
  d.count = dims[0];
  if (magic == magic_images) {
    d.rows = dims[1];
    d.cols = dims[2];
    const std::int64_t features = dims[1] * dims[2];
    d.inputs.resize(static_cast<std::size_t>(d.count));
    for (std::int64_t i = 0; i < d.count; ++i) {
      Vec& row = d.inputs[static_cast<std::size_t>(i)];
      row.resize(static_cast<std::size_t>(features));
      const std::size_t base = header + static_cast<std::size_t>(i * features);
      for (std::int64_t j = 0; j < features; ++j) {
        row[static_cast<std::size_t>(j)] =
            static_cast<double>(bytes[base + static_cast<std::size_t>(j)]) / 255.0;
      }
    }
  } else {
    d.targets.resize(static_cast<std::size_t>(d.count));
    for (std::int64_t i = 0; i < d.count; ++i) {
      d.targets[static_cast<std::size_t>(i)] =
          static_cast<double>(bytes[header + static_cast<std::size_t>(i)]);
    }
  }
  return d;
}

Dataset load_idx(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("idx: cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_idx(bytes);
}

std::vector<std::uint8_t> idx_bytes(const Dataset& d) {
  std::vector<std::uint8_t> out;
  if (!d.inputs.empty()) {
    write_be32(out, magic_images);
    write_be32(out, static_cast<std::uint32_t>(d.count));
    write_be32(out, static_cast<std::uint32_t>(d.rows));
    write_be32(out, static_cast<std::uint32_t>(d.cols));
    for (const Vec& row : d.inputs) {
      for (double v : row) {
        out.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
      }
    }
  } else {
    write_be32(out, magic_labels);
    write_be32(out, static_cast<std::uint32_t>(d.count));
    for (double v : d.targets) {
      out.push_back(static_cast<std::uint8_t>(std::lround(v)));
    }
  }
  return out;
}

void save_idx(const Dataset& d, const std::string& path) {
  const std::vector<std::uint8_t> bytes = idx_bytes(d);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("idx: cannot write '" + path + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Dataset with_labels(Dataset images, const Dataset& labels) {
  if (images.count != labels.count) {
    throw std::invalid_argument("idx: image count " + std::to_string(images.count) +
                                " does not match label count " +
                                std::to_string(labels.count));
  }
  images.targets = labels.targets;
  return images;
}

}  // namespace gradkit
