// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#include "flexquant/tensor.hpp"

#include "flexquant/errors.hpp"

namespace flexquant {

std::size_t shape_size(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor Tensor::from(std::vector<std::size_t> shape, std::vector<float> data) {
  if (shape.empty()) throw InputError("tensor must have at least one dim");
  for (std::size_t d : shape) {
    if (d == 0) throw InputError("tensor dims must be positive");
  }
  if (shape_size(shape) != data.size()) {
    throw InputError("tensor shape does not match element count");
  }
  Tensor t;
  t.shape = std::move(shape);
  t.data = std::move(data);
  return t;
}

std::size_t Tensor::rows() const {
  if (shape.size() != 2) throw InputError("expected a 2-D tensor");
  return shape[0];
}

std::size_t Tensor::cols() const {
  if (shape.size() != 2) throw InputError("expected a 2-D tensor");
  return shape[1];
}

}  // namespace flexquant
