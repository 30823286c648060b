// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexquant/tensorio.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "flexquant/errors.hpp"

namespace flexquant {

namespace {

constexpr char kMagic[4] = {'F', 'X', 'Q', 'T'};
constexpr std::uint16_t kVersion = 1;

[[noreturn]] void fail(const std::string& path, std::size_t offset,
                       const std::string& what) {
  throw InputError(path + ": " + what + " at byte " + std::to_string(offset));
}

std::uint32_t read_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u32le(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

}  // namespace

Tensor read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (in.bad()) throw InputError(path + ": read failure");

  if (buf.size() < 8) fail(path, buf.size(), "truncated header");
  if (std::memcmp(buf.data(), kMagic, 4) != 0) fail(path, 0, "bad magic");
  const std::uint16_t version =
      static_cast<std::uint16_t>(buf[4] | (buf[5] << 8));
  if (version != kVersion) fail(path, 4, "unsupported version");
  if (buf[6] != 0) fail(path, 6, "unsupported dtype");
  const std::size_t ndim = buf[7];
  if (ndim == 0) fail(path, 7, "ndim must be >= 1");

  const std::size_t dims_end = 8 + 4 * ndim;
  if (buf.size() < dims_end) fail(path, buf.size(), "truncated dims");
  std::vector<std::size_t> shape(ndim);
  std::size_t count = 1;
  for (std::size_t i = 0; i < ndim; ++i) {
    const std::uint32_t d = read_u32le(buf.data() + 8 + 4 * i);
    if (d == 0) fail(path, 8 + 4 * i, "zero dim");
    shape[i] = d;
    count *= d;
  }

  const std::size_t expected = dims_end + 4 * count;
  if (buf.size() < expected) fail(path, buf.size(), "truncated payload");
  if (buf.size() > expected) fail(path, expected, "trailing bytes");

  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t off = dims_end + 4 * i;
    const float v = std::bit_cast<float>(read_u32le(buf.data() + off));
    if (!std::isfinite(v)) fail(path, off, "non-finite payload value");
    data[i] = v;
  }
  return Tensor::from(std::move(shape), std::move(data));
}

void write_tensor(const std::string& path, const Tensor& tensor) {
  if (tensor.shape.empty()) throw InputError("write_tensor: ndim must be >= 1");
  if (tensor.shape.size() > 255) throw InputError("write_tensor: too many dims");
  std::size_t count = 1;
  for (std::size_t d : tensor.shape) {
    if (d == 0) throw InputError("write_tensor: zero dim");
    if (d > 0xFFFFFFFFull) throw InputError("write_tensor: dim exceeds u32");
    count *= d;
  }
  if (count != tensor.data.size()) {
    throw InputError("write_tensor: shape does not match element count");
  }

  std::vector<unsigned char> buf;
  buf.reserve(8 + 4 * tensor.shape.size() + 4 * count);
  buf.insert(buf.end(), kMagic, kMagic + 4);
  buf.push_back(kVersion & 0xFF);
  buf.push_back(kVersion >> 8);
  buf.push_back(0);  // dtype
  buf.push_back(static_cast<unsigned char>(tensor.shape.size()));
  for (std::size_t d : tensor.shape) {
    append_u32le(buf, static_cast<std::uint32_t>(d));
  }
  for (float v : tensor.data) {
    append_u32le(buf, std::bit_cast<std::uint32_t>(v));
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw InputError(path + ": write failure");
}

}  // namespace flexquant
