// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLEXQUANT_ERROR_MODEL_HPP
#define FLEXQUANT_ERROR_MODEL_HPP

#include <cstddef>
#include <string>

#include "flexquant/quantizer.hpp"
#include "flexquant/tensor.hpp"

namespace flexquant {

// Quantization MSE split into its clipping and rounding parts, plus the
// resolution bound (1/4I) sum r_i^2 over the un-clipped elements. The
// bound always dominates the rounding term.
struct ErrorBreakdown {
  double total = 0.0;
  double clip = 0.0;
  double round = 0.0;
  std::size_t count = 0;
  double resolution_bound = 0.0;
};

// clip  = (1/I) sum over |x| >  clip_bound of (|x| - clip_bound)^2
// round = (1/I) sum over |x| <= clip_bound of (x - q(x))^2
// Accumulation is sequential in index order, in 64-bit reals.
ErrorBreakdown error_breakdown(const Tensor& t, const QuantConfig& cfg);

// The resolution bound alone; skips quantization entirely, which is what
// makes resolution-criterion search cheap.
double resolution_bound(const Tensor& t, const QuantConfig& cfg);

// (1/I) sum (a_i - b_i)^2; shapes must match.
double mse(const Tensor& a, const Tensor& b);

// {"total":..., "clip":..., "round":..., "count":..., "resolution_bound":...}
std::string to_json(const ErrorBreakdown& b);

}  // namespace flexquant

#endif  // FLEXQUANT_ERROR_MODEL_HPP
