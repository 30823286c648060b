// Copyright 2026 The flexquant Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FLEXQUANT_QUANTIZER_HPP
#define FLEXQUANT_QUANTIZER_HPP

#include <cstdint>
#include <vector>

#include "flexquant/formats.hpp"
#include "flexquant/tensor.hpp"

namespace flexquant {

// A chosen number system plus a per-tensor symmetric scale.
// clip_bound is the largest representable magnitude in real units:
// (2^(bits-1)-1) * scale for integers, max_normal * scale for fp.
struct QuantConfig {
  NumberSystem system;
  double scale = 1.0;
  double clip_bound = 0.0;
  // Set by MinMax calibration on an all-zero tensor (scale falls back
  // to 1); quantization still works, selection results are flagged.
  bool degenerate = false;
};

// Largest representable magnitude at scale 1.
double representable_max(const NumberSystem& system);

// Config with the given scale and the implied clip bound.
QuantConfig make_config(const NumberSystem& system, double scale);

// MinMax: scale = max|t| / representable_max, so the extreme element
// lands exactly on the largest code. All-zero input degenerates to
// scale 1 with the flag set; empty input is an error.
QuantConfig calibrate_minmax(const Tensor& t, const NumberSystem& system);

struct QuantizedTensor {
  Tensor values;                    // simulated (dequantized) values
  std::vector<std::uint8_t> codes;  // low bits significant
};

// Element-wise simulated quantization:
//   int: dequantize(quantize(x, scale, bits))
//   fp:  scale * fp_quantize_value(x / scale)
QuantizedTensor quantize_tensor(const Tensor& t, const QuantConfig& cfg);

// Per-element resolution r_i (local spacing of representable values, in
// real units): the constant step for integers; scale * 2^(floor(log2 u) - m)
// for fp magnitudes u = |x|/scale in the normal range, the subnormal step
// below it, and the top-binade step for clipped elements. With subnormals
// disabled the sub-normal-range spacing is the whole gap 2^(1-b).
using ResolutionProfile = std::vector<double>;
ResolutionProfile resolution_profile(const Tensor& t, const QuantConfig& cfg);

// Scalar forms used by the hot paths.
double quantize_element(double x, const QuantConfig& cfg);
double element_resolution(double x, const QuantConfig& cfg);

}  // namespace flexquant

#endif  // FLEXQUANT_QUANTIZER_HPP
