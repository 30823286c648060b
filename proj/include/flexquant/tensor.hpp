// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLEXQUANT_TENSOR_HPP
#define FLEXQUANT_TENSOR_HPP

#include <cstddef>
#include <vector>

namespace flexquant {

// Dense row-major tensor of 32-bit reals.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<float> data;

  std::size_t size() const { return data.size(); }

  // Validates shape (at least one dim, all dims positive) against data.
  static Tensor from(std::vector<std::size_t> shape, std::vector<float> data);

  // 2-D accessors; throw unless shape.size() == 2.
  std::size_t rows() const;
  std::size_t cols() const;
  float at(std::size_t r, std::size_t c) const { return data[r * cols() + c]; }
};

std::size_t shape_size(const std::vector<std::size_t>& shape);

}  // namespace flexquant

#endif  // FLEXQUANT_TENSOR_HPP
