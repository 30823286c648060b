// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLEXQUANT_TENSORIO_HPP
#define FLEXQUANT_TENSORIO_HPP

#include <string>

#include "flexquant/tensor.hpp"

namespace flexquant {

// Binary tensor file, little-endian throughout:
//   offset 0  magic "FXQT"
//   offset 4  u16 version = 1
//   offset 6  u8  dtype   = 0 (32-bit real)
//   offset 7  u8  ndim    >= 1
//   offset 8  ndim x u32 dims
//   then      row-major 32-bit payload, exactly 4 * prod(dims) bytes
//
// The reader accepts exactly what the writer produces: wrong magic,
// version, dtype, dim counts, truncated or oversized payloads, and
// non-finite payload values are all rejected with the byte offset.
Tensor read_tensor(const std::string& path);
void write_tensor(const std::string& path, const Tensor& tensor);

}  // namespace flexquant

#endif  // FLEXQUANT_TENSORIO_HPP
